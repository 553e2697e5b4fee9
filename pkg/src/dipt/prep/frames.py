"""Zero-order-hold merging of telemetry and camera streams onto a tick grid."""

from bisect import bisect_right
from dataclasses import dataclass, field

from ..sim import EventKind, RunLog, TelemetryRecord
from .logio import log_digest


class EmptyLog(Exception):
    pass


@dataclass
class AlignedFrame:
    """Latest values at or before the tick; nothing from the future.

    Per-UAV entries are the held TelemetryRecord itself (its .time says how
    stale it is). A UAV missing from `uavs` has not reported yet. `perceived`
    holds the last reported target position (sticky), while `detected` is
    true only when that report is younger than one camera period.
    """

    time: float
    uavs: dict[int, TelemetryRecord] = field(default_factory=dict)
    fov_deg: float = 0.0
    visibility: float = 0.0
    light_level: float = 0.0
    detected: bool = False
    perceived: tuple[float, float] | None = None
    detection_time: float | None = None


class FrameSeries:
    """Frames plus provenance: which log they came from and the tick rate."""

    def __init__(self, frames: list[AlignedFrame], tick_hz: float, source_digest: str, config):
        self.frames = frames
        self.tick_hz = tick_hz
        self.log_digest = source_digest
        self.config = config

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, i):
        return self.frames[i]


def merge_streams(log: RunLog, tick_hz: float) -> FrameSeries:
    """One frame per tick from the first to the last timestamp in the log."""
    if tick_hz <= 0:
        raise ValueError("tick_hz must be > 0")
    times = [r.time for r in log.telemetry] + [e.time for e in log.events]
    if not times:
        raise EmptyLog("log has no telemetry and no events")
    t0, t1 = min(times), max(times)

    per_uav: dict[int, list[TelemetryRecord]] = {}
    for r in log.telemetry:
        per_uav.setdefault(r.uav_id, []).append(r)
    uav_times = {u: [r.time for r in rs] for u, rs in per_uav.items()}

    dets = [e.detection for e in log.events if e.kind is EventKind.DETECTION]
    det_times = [d.time for d in dets]

    cfg = log.config
    fresh = 1.0 / cfg.camera_rate_hz
    n_frames = int((t1 - t0) * tick_hz + 1e-9) + 1
    frames: list[AlignedFrame] = []
    for k in range(n_frames):
        t = t0 + k / tick_hz
        uavs = {}
        for u, ts in uav_times.items():
            i = bisect_right(ts, t + 1e-12) - 1
            if i >= 0:
                uavs[u] = per_uav[u][i]
        j = bisect_right(det_times, t + 1e-12) - 1
        det = dets[j] if j >= 0 else None
        frames.append(
            AlignedFrame(
                time=t,
                uavs=uavs,
                fov_deg=cfg.camera_fov_deg,
                visibility=cfg.visibility,
                light_level=cfg.light_level,
                detected=det is not None and det.time > t - fresh,
                perceived=(det.perceived_x, det.perceived_y) if det is not None else None,
                detection_time=det.time if det is not None else None,
            )
        )
    return FrameSeries(frames, tick_hz, log_digest(log), cfg)
