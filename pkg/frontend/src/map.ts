import { FrameDoc, RunSummary } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export interface UavGlyph {
  x: number;
  y: number;
  heading: number;
  inferred: string | null;
}

export interface Segment {
  from: Point;
  to: Point;
}

export interface MapLayers {
  /** Search area rectangle anchored at the origin. */
  area: { width: number; height: number };
  /** One polyline per UAV, in frame order. */
  tracks: Point[][];
  glyphs: UavGlyph[];
  truthTarget: Point | null;
  perceivedTarget: Point | null;
  /** Perceived-to-truth segment; present only when both markers exist. */
  errorSegment: Segment | null;
}

/**
 * Accumulated UAV positions across received frames.
 *
 * Points are only appended, never removed, so the polyline length grows
 * monotonically.  Re-visiting earlier times (after a backwards seek) adds
 * nothing: those points are already part of the track.
 */
export class TrackHistory {
  private tracks = new Map<number, Point[]>();
  private maxTimes = new Map<number, number>();

  add(frame: FrameDoc): void {
    frame.uavs.forEach((uav, i) => {
      const last = this.maxTimes.get(i);
      if (last !== undefined && uav.time <= last) return;
      let track = this.tracks.get(i);
      if (track === undefined) {
        track = [];
        this.tracks.set(i, track);
      }
      track.push({ x: uav.x, y: uav.y });
      this.maxTimes.set(i, uav.time);
    });
  }

  polylines(): Point[][] {
    const keys = [...this.tracks.keys()].sort((a, b) => a - b);
    return keys.map((k) => [...this.tracks.get(k)!]);
  }

  reset(): void {
    this.tracks.clear();
    this.maxTimes.clear();
  }
}

/** Build the map layer set for one frame. Missing fields become absent layers. */
export function renderMap(frame: FrameDoc, run: RunSummary, history: TrackHistory): MapLayers {
  history.add(frame);
  // absent targets are parked far outside the area; the run flag is the signal
  const truth: Point | null = run.target_present
    ? { x: frame.target[0], y: frame.target[1] }
    : null;
  const perceived: Point | null = frame.perceived
    ? { x: frame.perceived[0], y: frame.perceived[1] }
    : null;
  return {
    area: { width: run.area[0], height: run.area[1] },
    tracks: history.polylines(),
    glyphs: frame.uavs.map((u) => ({
      x: u.x,
      y: u.y,
      heading: u.heading,
      inferred: u.inferred_state,
    })),
    truthTarget: truth,
    perceivedTarget: perceived,
    errorSegment: truth && perceived ? { from: perceived, to: truth } : null,
  };
}

export interface Viewport {
  scale: number;
  offsetX: number;
  offsetY: number;
  canvasHeight: number;
}

const WORLD_PAD = 100;

/** Fit the search area (plus a margin for spawn points) into the canvas. */
export function fitViewport(
  area: { width: number; height: number },
  canvasWidth: number,
  canvasHeight: number,
): Viewport {
  const worldW = area.width + 2 * WORLD_PAD;
  const worldH = area.height + 2 * WORLD_PAD;
  const scale = Math.min(canvasWidth / worldW, canvasHeight / worldH);
  return {
    scale,
    offsetX: WORLD_PAD * scale,
    offsetY: WORLD_PAD * scale,
    canvasHeight,
  };
}

/** World coordinates to canvas pixels; world y points up, canvas y points down. */
export function project(p: Point, vp: Viewport): Point {
  return {
    x: vp.offsetX + p.x * vp.scale,
    y: vp.canvasHeight - (vp.offsetY + p.y * vp.scale),
  };
}

/** Thin canvas renderer over the layer model; all geometry lives in renderMap. */
export function drawMap(ctx: CanvasRenderingContext2D, layers: MapLayers, vp: Viewport): void {
  const w = ctx.canvas.width;
  const h = ctx.canvas.height;
  ctx.clearRect(0, 0, w, h);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, w, h);

  const origin = project({ x: 0, y: layers.area.height }, vp);
  ctx.strokeStyle = "#3b4a5a";
  ctx.lineWidth = 1;
  ctx.strokeRect(origin.x, origin.y, layers.area.width * vp.scale, layers.area.height * vp.scale);

  ctx.strokeStyle = "#4f8fd9";
  for (const track of layers.tracks) {
    if (track.length < 2) continue;
    ctx.beginPath();
    const first = project(track[0], vp);
    ctx.moveTo(first.x, first.y);
    for (const p of track.slice(1)) {
      const q = project(p, vp);
      ctx.lineTo(q.x, q.y);
    }
    ctx.stroke();
  }

  if (layers.errorSegment) {
    const a = project(layers.errorSegment.from, vp);
    const b = project(layers.errorSegment.to, vp);
    ctx.strokeStyle = "#d9a24f";
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  if (layers.truthTarget) {
    const t = project(layers.truthTarget, vp);
    ctx.strokeStyle = "#d94f4f";
    ctx.beginPath();
    ctx.arc(t.x, t.y, 6, 0, 2 * Math.PI);
    ctx.stroke();
  }

  if (layers.perceivedTarget) {
    const p = project(layers.perceivedTarget, vp);
    ctx.fillStyle = "#d9a24f";
    ctx.beginPath();
    ctx.arc(p.x, p.y, 4, 0, 2 * Math.PI);
    ctx.fill();
  }

  for (const glyph of layers.glyphs) {
    const c = project({ x: glyph.x, y: glyph.y }, vp);
    // heading 0 = +x, counter-clockwise in world space; canvas y is flipped
    const a = glyph.heading;
    const nose = { x: c.x + 10 * Math.cos(a), y: c.y - 10 * Math.sin(a) };
    const left = { x: c.x + 5 * Math.cos(a + 2.5), y: c.y - 5 * Math.sin(a + 2.5) };
    const right = { x: c.x + 5 * Math.cos(a - 2.5), y: c.y - 5 * Math.sin(a - 2.5) };
    ctx.fillStyle = "#8fd94f";
    ctx.beginPath();
    ctx.moveTo(nose.x, nose.y);
    ctx.lineTo(left.x, left.y);
    ctx.lineTo(right.x, right.y);
    ctx.closePath();
    ctx.fill();
  }
}
