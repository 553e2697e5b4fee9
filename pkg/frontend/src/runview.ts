import { MapLayers, renderMap, TrackHistory } from "./map.js";
import { LampDecay, PanelModel, renderStatePanel } from "./panel.js";
import { PlaybackSession, SocketFactory } from "./session.js";
import { RunSummary } from "./types.js";
import { applySnapshot, initialViewState, ViewState } from "./viewstate.js";

export interface RenderedView {
  view: ViewState;
  layers: MapLayers | null;
  panel: PanelModel | null;
}

/**
 * The single-run view: one streaming session folded into a view state,
 * map layers, and a state panel on every message.  Everything rendered
 * comes from the last frame the service sent.
 */
export class RunView {
  readonly session: PlaybackSession;
  private readonly history = new TrackHistory();
  private readonly decay = new LampDecay();
  private listeners: Array<(r: RenderedView) => void> = [];

  view: ViewState;
  layers: MapLayers | null = null;
  panel: PanelModel | null = null;

  constructor(
    readonly run: RunSummary,
    streamUrl: string,
    factory: SocketFactory,
    private readonly uavIndex = 0,
  ) {
    this.view = { ...initialViewState(), runId: run.run_id, connected: true };
    this.session = new PlaybackSession(streamUrl, factory);
    this.session.onChange((snap) => {
      this.view = applySnapshot(this.view, snap);
      const frame = this.view.frame;
      if (frame) {
        this.layers = renderMap(frame, this.run, this.history);
        const uav = frame.uavs[this.uavIndex];
        this.panel = uav ? renderStatePanel(uav, this.decay) : null;
      }
      const rendered = this.rendered();
      for (const fn of this.listeners) fn(rendered);
    });
  }

  onRender(fn: (r: RenderedView) => void): void {
    this.listeners.push(fn);
  }

  rendered(): RenderedView {
    return { view: this.view, layers: this.layers, panel: this.panel };
  }

  play(): void {
    this.session.play();
  }

  pause(): void {
    this.session.pause();
  }

  seek(time: number): void {
    this.session.seek(time);
  }

  setRate(rate: number): void {
    this.session.setRate(rate);
  }

  close(): void {
    this.session.close();
  }
}
