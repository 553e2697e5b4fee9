"""HTTP and streaming endpoints over a ReplayStore.

The playback loop is single-tasked per connection: it waits for a command
for at most one frame interval, then emits the next frame. Commands are
therefore always applied before the following frame, which is what makes
"no frames after the pause acknowledgment" a structural guarantee instead
of a race, and every session's cursor lives in its own handler frame.
"""

import asyncio
from bisect import bisect_left

from fastapi import FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect

from ..formats import FORMAT_VERSION
from .store import BadRange, ReplayStore, RunNotFound


def _nearest_tick(times: list[float], t: float) -> int:
    i = bisect_left(times, t)
    if i <= 0:
        return 0
    if i >= len(times):
        return len(times) - 1
    return i if (times[i] - t) < (t - times[i - 1]) else i - 1


def create_app(store: ReplayStore) -> FastAPI:
    app = FastAPI(title="dipt-replay")
    app.state.store = store

    @app.get("/runs")
    def list_runs() -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "runs": [e.to_doc() for e in store.entries()],
        }

    @app.get("/runs/{run_id}")
    def get_run(run_id: str) -> dict:
        try:
            return store.entry(run_id).to_doc()
        except RunNotFound:
            raise HTTPException(status_code=404, detail=f"no run {run_id}") from None

    @app.get("/runs/{run_id}/frames")
    def get_frames(
        run_id: str,
        t_from: float | None = Query(default=None, alias="from"),
        t_to: float | None = Query(default=None, alias="to"),
    ) -> dict:
        try:
            frames = store.frames(run_id, t_from, t_to)
        except RunNotFound:
            raise HTTPException(status_code=404, detail=f"no run {run_id}") from None
        except BadRange as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return {
            "format_version": FORMAT_VERSION,
            "run_id": run_id,
            "frames": frames,
        }

    @app.websocket("/runs/{run_id}/stream")
    async def stream(ws: WebSocket, run_id: str) -> None:
        await ws.accept()
        try:
            overlay = store.overlay(run_id)
        except RunNotFound:
            await ws.send_json({"kind": "error", "error": "RunNotFound", "run_id": run_id})
            await ws.close(code=4404)
            return
        frames = overlay["frames"]
        times = [f["time"] for f in frames]
        dt = 1.0 / overlay["tick_hz"]
        cursor = 0
        rate = 1.0
        playing = False

        def ack(command: str) -> dict:
            at = times[min(cursor, len(times) - 1)] if times else 0.0
            return {
                "kind": "ack",
                "command": command,
                "cursor": at,
                "rate": rate,
                "playing": playing,
            }

        try:
            while True:
                try:
                    if playing:
                        msg = await asyncio.wait_for(ws.receive_text(), timeout=dt / rate)
                    else:
                        msg = await ws.receive_text()
                except asyncio.TimeoutError:
                    if cursor < len(frames):
                        await ws.send_json({"kind": "frame", **frames[cursor]})
                        cursor += 1
                    else:
                        playing = False
                        await ws.send_json({"kind": "end", "cursor": times[-1] if times else 0.0})
                    continue

                parts = msg.strip().split()
                cmd = parts[0] if parts else ""
                if cmd == "play" and len(parts) == 1:
                    playing = True
                    await ws.send_json(ack("play"))
                elif cmd == "pause" and len(parts) == 1:
                    playing = False
                    await ws.send_json(ack("pause"))
                elif cmd == "seek" and len(parts) == 2 and frames:
                    try:
                        target = float(parts[1])
                    except ValueError:
                        await ws.send_json(
                            {"kind": "error", "error": "MalformedCommand", "detail": msg}
                        )
                        continue
                    cursor = _nearest_tick(times, target)
                    await ws.send_json(ack("seek"))
                    await ws.send_json({"kind": "frame", **frames[cursor]})
                    cursor += 1
                elif cmd == "rate" and len(parts) == 2:
                    try:
                        value = float(parts[1])
                    except ValueError:
                        value = -1.0
                    if value <= 0.0:
                        await ws.send_json(
                            {"kind": "error", "error": "MalformedCommand", "detail": msg}
                        )
                        continue
                    rate = value
                    await ws.send_json(ack("rate"))
                else:
                    await ws.send_json(
                        {"kind": "error", "error": "MalformedCommand", "detail": msg}
                    )
        except WebSocketDisconnect:
            return

    return app
