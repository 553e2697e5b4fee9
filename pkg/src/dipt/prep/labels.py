"""Labeled instances from the truth event channel.

State task: one instance per (tick, UAV) with the behavior state active at
that tick. Transition task: one instance per state change, attached to the
tick holding it. Labels come only from TruthEvent records, never from the
telemetry itself.
"""

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from ..sim import BehaviorState, EventKind, RunLog
from .features import WindowTooShort, derive_features
from .frames import FrameSeries
from .logio import log_digest


class MismatchedLog(Exception):
    pass


@dataclass(frozen=True, eq=False)
class LabeledInstance:
    features: np.ndarray  # raw (unnormalized) feature vector
    label: str
    time: float
    uav_id: int


def _state_timelines(log: RunLog) -> dict[int, tuple[list[float], list[str]]]:
    lines: dict[int, tuple[list[float], list[str]]] = {}
    for e in log.events:
        if e.kind is not EventKind.STATE_CHANGE:
            continue
        times, states = lines.setdefault(e.uav_id, ([], []))
        times.append(e.time)
        states.append(e.state.value)
    return lines


def _state_at(timeline, t: float) -> str:
    times, states = timeline
    i = bisect_right(times, t + 1e-9) - 1
    return states[i] if i >= 0 else BehaviorState.HOLD.value


def label_frames(log: RunLog, frames: FrameSeries, task: str = "state", window: int = 3):
    """Build LabeledInstance list for `task` ("state" or "transition")."""
    if task not in ("state", "transition"):
        raise ValueError(f"unknown task '{task}'")
    if frames.log_digest != log_digest(log):
        raise MismatchedLog("frames were derived from a different log")
    if window < 2:
        raise ValueError("window must be >= 2")

    timelines = _state_timelines(log)
    uav_ids = sorted({r.uav_id for r in log.telemetry})
    area = log.config.area
    out: list[LabeledInstance] = []

    if task == "state":
        for i in range(window - 1, len(frames)):
            win = frames[i - window + 1 : i + 1]
            t = frames[i].time
            for u in uav_ids:
                try:
                    vec = derive_features(win, u, area)
                except WindowTooShort:
                    continue
                label = _state_at(timelines.get(u, ([], [])), t)
                out.append(LabeledInstance(features=vec, label=label, time=t, uav_id=u))
        return out

    frame_times = [f.time for f in frames]
    for e in log.events:
        if e.kind is not EventKind.STATE_CHANGE:
            continue
        i = bisect_right(frame_times, e.time + 1e-9) - 1
        if i < window - 1:
            continue
        win = frames[i - window + 1 : i + 1]
        try:
            vec = derive_features(win, e.uav_id, area)
        except WindowTooShort:
            continue
        out.append(
            LabeledInstance(
                features=vec, label=e.trigger.value, time=frames[i].time, uav_id=e.uav_id,
            )
        )
    return out
