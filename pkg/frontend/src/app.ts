import { ReplayApi } from "./api.js";
import { drawMap, fitViewport, Viewport } from "./map.js";
import { PanelModel } from "./panel.js";
import { RenderedView, RunView } from "./runview.js";
import { SocketFactory, SocketLike } from "./session.js";
import { RunSummary } from "./types.js";

/** Browser WebSocket adapted to the session's socket shape; queues sends until open. */
const browserSocketFactory: SocketFactory = (url) => {
  const ws = new WebSocket(url);
  let open = false;
  const queue: string[] = [];
  const wrapper: SocketLike = {
    send(data) {
      if (open) ws.send(data);
      else queue.push(data);
    },
    close: () => ws.close(),
    onmessage: null,
    onclose: null,
  };
  ws.onopen = () => {
    open = true;
    for (const data of queue) ws.send(data);
    queue.length = 0;
  };
  ws.onmessage = (ev) => wrapper.onmessage?.(String(ev.data));
  ws.onclose = () => wrapper.onclose?.();
  return wrapper;
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class App {
  private api = new ReplayApi(window.location.origin);
  private runView: RunView | null = null;
  private viewport: Viewport | null = null;
  private scrubbing = false;

  private canvas = el<HTMLCanvasElement>("map");
  private runList = el<HTMLUListElement>("run-list");
  private banner = el<HTMLDivElement>("banner");
  private playBtn = el<HTMLButtonElement>("play");
  private rateSel = el<HTMLSelectElement>("rate");
  private slider = el<HTMLInputElement>("timeline");
  private clock = el<HTMLSpanElement>("clock");
  private badgeMain = el<HTMLSpanElement>("badge-main");
  private badgeTruth = el<HTMLSpanElement>("badge-truth");
  private lampGrid = el<HTMLDivElement>("lamps");
  private gaugeScore = el<HTMLSpanElement>("gauge-score");
  private gaugeLabel = el<HTMLSpanElement>("gauge-label");
  private ruleList = el<HTMLUListElement>("rules");

  async start(): Promise<void> {
    this.playBtn.addEventListener("click", () => {
      if (!this.runView) return;
      if (this.runView.view.status.playing) this.runView.pause();
      else this.runView.play();
    });
    this.rateSel.addEventListener("change", () => {
      this.runView?.setRate(Number(this.rateSel.value));
    });
    this.slider.addEventListener("pointerdown", () => (this.scrubbing = true));
    this.slider.addEventListener("pointerup", () => (this.scrubbing = false));
    this.slider.addEventListener("input", () => {
      this.runView?.seek(Number(this.slider.value));
    });

    const runs = await this.api.listRuns();
    for (const run of runs) {
      const item = document.createElement("li");
      item.textContent = `${run.run_id}  (${run.outcome}, ${run.duration.toFixed(0)} s)`;
      item.addEventListener("click", () => this.openRun(run));
      this.runList.appendChild(item);
    }
  }

  private openRun(run: RunSummary): void {
    this.runView?.close();
    this.viewport = fitViewport(
      { width: run.area[0], height: run.area[1] },
      this.canvas.width,
      this.canvas.height,
    );
    this.slider.min = "0";
    this.slider.max = String(run.duration);
    this.slider.step = String(1 / run.tick_hz);

    this.runView = new RunView(run, this.api.streamUrl(run.run_id), browserSocketFactory);
    this.runView.onRender((rendered) => this.render(rendered));
    this.runView.seek(0.0);
    this.render(this.runView.rendered());
  }

  private render(rendered: RenderedView): void {
    const { view, layers, panel } = rendered;
    const disconnected = view.runId !== null && !view.connected;
    this.banner.classList.toggle("hidden", !disconnected);
    const disabled = view.runId === null || disconnected;
    this.playBtn.disabled = disabled;
    this.rateSel.disabled = disabled;
    this.slider.disabled = disabled;
    this.playBtn.textContent = view.status.playing ? "Pause" : "Play";

    if (!view.frame || !layers || !this.viewport) return;

    drawMap(this.canvas.getContext("2d")!, layers, this.viewport);

    if (!this.scrubbing) this.slider.value = String(view.frame.time);
    this.clock.textContent = `${view.frame.time.toFixed(1)} s`;
    if (panel) this.renderPanel(panel);
  }

  private renderPanel(panel: PanelModel): void {
    this.badgeMain.textContent = panel.badge.shown ?? "n/a";
    this.badgeTruth.textContent = `truth: ${panel.badge.truth}`;
    this.badgeMain.classList.toggle("mismatch", panel.badge.mismatch);

    this.lampGrid.replaceChildren(
      ...panel.lamps.map((lamp) => {
        const node = document.createElement("div");
        node.className = `lamp ${lamp.status.toLowerCase()}`;
        node.title = lamp.trigger;
        node.textContent = lamp.trigger.replace(/([A-Z])/g, " $1").trim();
        return node;
      }),
    );

    this.gaugeScore.textContent = panel.gauge.noFiring ? "n/a" : panel.gauge.score.toFixed(3);
    this.gaugeLabel.textContent = panel.gauge.noFiring ? "no rule fired" : panel.gauge.label;

    this.ruleList.replaceChildren(
      ...panel.rules.map((rule) => {
        const node = document.createElement("li");
        node.textContent = `${rule.antecedent.join(" / ")}  [${rule.fLo.toFixed(2)}, ${rule.fUp.toFixed(2)}]`;
        return node;
      }),
    );
  }
}

new App().start().catch((err) => {
  document.body.insertAdjacentText("beforeend", `failed to start: ${err}`);
});
