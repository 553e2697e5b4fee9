import { SessionSnapshot } from "./session.js";
import { Viewport } from "./map.js";
import { FrameDoc, PlaybackStatus } from "./types.js";

export interface ViewState {
  runId: string | null;
  status: PlaybackStatus;
  /** Latest enriched frame; the rendered frame is always exactly this. */
  frame: FrameDoc | null;
  viewport: Viewport | null;
  connected: boolean;
  ended: boolean;
  error: string | null;
}

export function initialViewState(): ViewState {
  return {
    runId: null,
    status: { playing: false, cursor: 0, rate: 1.0 },
    frame: null,
    viewport: null,
    connected: false,
    ended: false,
    error: null,
  };
}

/**
 * Fold a session snapshot into the view.  The frame is copied verbatim so
 * whatever the view renders is the last frame the service sent, nothing
 * recomputed client-side.
 */
export function applySnapshot(view: ViewState, snap: SessionSnapshot): ViewState {
  return {
    ...view,
    status: snap.status,
    frame: snap.frame,
    connected: snap.connected,
    ended: snap.ended,
    error: snap.error,
  };
}
