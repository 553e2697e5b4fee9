import { describe, expect, it } from "vitest";

import { RunView } from "../src/runview.js";
import { SocketFactory, SocketLike } from "../src/session.js";
import { FrameDoc } from "../src/types.js";
import { makeFrames, makeRun } from "./fixtures.js";
import { MockService } from "./mockservice.js";

/** Open a run view over a mock service with a tap on the wire frames. */
function openRun(frames: FrameDoc[]): { view: RunView; mock: MockService; wire: number[] } {
  const mock = new MockService(frames);
  const wire: number[] = [];
  const factory: SocketFactory = () => {
    const socket: SocketLike = {
      send: (data) => mock.send(data),
      close: () => mock.close(),
      onmessage: null,
      onclose: null,
    };
    mock.onmessage = (data) => {
      const doc = JSON.parse(data) as { kind: string; time?: number };
      if (doc.kind === "frame" && doc.time !== undefined) wire.push(doc.time);
      socket.onmessage?.(data);
    };
    mock.onclose = () => socket.onclose?.();
    return socket;
  };
  const view = new RunView(makeRun(), "ws://test/stream", factory);
  return { view, mock, wire };
}

describe("run view", () => {
  it("renders the track, state badge, and all 11 trigger lamps after loading", () => {
    const { view, mock } = openRun(makeFrames(40));
    view.seek(0.0);
    view.play();
    mock.pump(5);

    expect(view.layers).not.toBeNull();
    expect(view.layers!.tracks).toHaveLength(1);
    expect(view.layers!.tracks[0].length).toBe(6);
    expect(view.layers!.glyphs).toHaveLength(1);

    expect(view.panel).not.toBeNull();
    expect(view.panel!.badge.shown).toBe("FlySearchPattern");
    expect(view.panel!.badge.truth).toBe("FlySearchPattern");
    expect(view.panel!.lamps).toHaveLength(11);
  });

  it("scrubbing to t displays the service's frame at t", () => {
    const frames = makeFrames(40);
    const { view, mock } = openRun(frames);

    view.seek(frames[17].time + 0.1);
    expect(view.view.frame).not.toBeNull();
    expect(view.view.frame!.time).toBe(frames[17].time);
    expect(view.view.frame!.uavs[0].x).toBe(frames[17].uavs[0].x);
    expect(view.layers!.glyphs[0].x).toBe(frames[17].uavs[0].x);
    expect(mock.sent[mock.sent.length - 1]).toBe(`seek ${frames[17].time + 0.1}`);
  });

  it("pause stops frame updates", () => {
    const { view, mock } = openRun(makeFrames(40));
    view.play();
    mock.pump(4);
    view.pause();
    expect(view.view.status.playing).toBe(false);

    const held = view.view.frame!.time;
    const trackLen = view.layers!.tracks[0].length;
    mock.pump(10);
    expect(view.view.frame!.time).toBe(held);
    expect(view.layers!.tracks[0].length).toBe(trackLen);
  });

  it("always renders exactly the last frame the service sent", () => {
    const frames = makeFrames(40);
    const { view, mock, wire } = openRun(frames);
    view.seek(3.0);
    view.play();
    mock.pump(7);
    view.pause();
    view.seek(1.0);
    view.play();
    mock.pump(2);

    expect(wire.length).toBeGreaterThan(0);
    expect(view.view.frame!.time).toBe(wire[wire.length - 1]);
  });

  it("produces the same rendered sequence for scrub-then-play and play-through", () => {
    const frames = makeFrames(30);
    const record = (view: RunView): number[] => {
      const seen: number[] = [];
      view.onRender((r) => {
        if (r.view.frame && r.view.frame.time !== seen[seen.length - 1]) {
          seen.push(r.view.frame.time);
        }
      });
      return seen;
    };

    const through = openRun(frames);
    const playedThrough = record(through.view);
    through.view.play();
    through.mock.pump(frames.length);

    const scrubbed = openRun(frames);
    const afterScrub = record(scrubbed.view);
    scrubbed.view.seek(frames[11].time);
    scrubbed.view.play();
    scrubbed.mock.pump(frames.length);

    expect(afterScrub).toEqual(playedThrough.slice(11));
  });

  it("shows the disconnected state when the stream drops", () => {
    const { view, mock } = openRun(makeFrames(20));
    view.play();
    mock.pump(2);
    expect(view.view.connected).toBe(true);

    mock.drop();
    expect(view.view.connected).toBe(false);

    const sent = mock.sent.length;
    view.play();
    expect(mock.sent.length).toBe(sent);
  });
});
