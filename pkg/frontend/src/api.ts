import { FORMAT_VERSION, FrameDoc, RunSummary } from "./types.js";

/** Minimal fetch shape so tests can inject a stub. */
export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

// same rule as the service: match the major segment, tolerate minor drift
function checkVersion(doc: { format_version?: unknown }): void {
  const v = doc.format_version;
  if (typeof v !== "string" || !v.includes(".")) {
    throw new ApiError(`bad format_version ${JSON.stringify(v)}`, 0);
  }
  if (v.split(".")[0] !== FORMAT_VERSION.split(".")[0]) {
    throw new ApiError(`unsupported format_version ${v}`, 0);
  }
}

export class ReplayApi {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get(path: string): Promise<unknown> {
    const resp = await this.fetchFn(this.base + path);
    if (!resp.ok) {
      let detail = `HTTP ${resp.status}`;
      try {
        const body = (await resp.json()) as { detail?: string };
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body, keep the status text
      }
      throw new ApiError(detail, resp.status);
    }
    return resp.json();
  }

  async listRuns(): Promise<RunSummary[]> {
    const doc = (await this.get("/runs")) as { runs: RunSummary[] };
    for (const run of doc.runs) checkVersion(run);
    return doc.runs;
  }

  async getRun(runId: string): Promise<RunSummary> {
    const doc = (await this.get(`/runs/${runId}`)) as RunSummary;
    checkVersion(doc);
    return doc;
  }

  async getFrames(runId: string, from?: number, to?: number): Promise<FrameDoc[]> {
    const params = new URLSearchParams();
    if (from !== undefined) params.set("from", String(from));
    if (to !== undefined) params.set("to", String(to));
    const query = params.toString();
    const path = `/runs/${runId}/frames` + (query ? `?${query}` : "");
    const doc = (await this.get(path)) as { frames: FrameDoc[] };
    return doc.frames;
  }

  /** ws:// URL for the streaming endpoint of a run. */
  streamUrl(runId: string): string {
    const ws = this.base.replace(/^http/, "ws");
    return `${ws}/runs/${runId}/stream`;
  }
}
