"""Run-level state timelines and trigger attribution.

The timeline carries one prediction per tick so it can be compared against
a truth timeline on the same grid. Every observed change is explained as
one of the eleven triggers. Ten of the thirteen legal edges carry a unique
trigger, so the
(source, target) pair decides outright. The two ambiguous exits back to
FlyOrbitAndObserve consult side signals in a fixed priority: battery level,
the abort schedule, then (for search exits) the search-end classifier.
A change with no legal edge is reported with the illegal flag set rather
than suppressed; downstream comparison counts those.
"""

from dataclasses import dataclass

from ..prep import WindowTooShort, apply_normalization, derive_features
from ..sim import BehaviorState, Trigger
from ..sim.behavior import triggers_for_edge
from .predict import predict
from .searchend import search_end_features


@dataclass(frozen=True)
class TimelineEntry:
    time: float
    label: str


@dataclass(frozen=True)
class InferredTransition:
    time: float
    uav_id: int
    source: str
    target: str
    trigger: str | None
    illegal: bool


@dataclass(frozen=True)
class InferredTimeline:
    states: dict[int, list[TimelineEntry]]
    transitions: list[InferredTransition]


def resolve_trigger(source: BehaviorState, target: BehaviorState, ctx):
    """(trigger, illegal) for an observed source -> target change.

    `ctx` supplies battery, abort_active, battery_low_threshold, and
    classify_search_end(). Unique edges ignore it entirely.
    """
    cands = triggers_for_edge(source, target)
    if not cands:
        return None, True
    if len(cands) == 1:
        return cands[0], False
    if Trigger.BATTERY_LOW in cands and ctx.battery < ctx.battery_low_threshold:
        return Trigger.BATTERY_LOW, False
    if Trigger.ABORT_MISSION in cands and ctx.abort_active:
        return Trigger.ABORT_MISSION, False
    if Trigger.SEARCH_TIMEOUT_REACHED in cands:
        return ctx.classify_search_end(), False
    return Trigger.SURVEY_COMPLETE, False


class _FrameContext:
    """Side signals read off the frame stream at one change point."""

    def __init__(self, *, battery, time, phase_start, uav_id, frames, config, search_end):
        self.battery = battery
        self.battery_low_threshold = config.battery_low_threshold
        self.abort_active = (
            config.abort_time_s is not None and time >= config.abort_time_s - 1e-9
        )
        self._time = time
        self._phase_start = phase_start
        self._uav_id = uav_id
        self._frames = frames
        self._config = config
        self._search_end = search_end

    def classify_search_end(self) -> Trigger:
        tel = [f.uavs[self._uav_id] for f in self._frames if self._uav_id in f.uavs]
        feats = search_end_features(
            tel,
            self._config,
            self._uav_id,
            fsp_seconds=self._time - self._phase_start,
            t_end=self._time,
        )
        if self._search_end is not None:
            return self._search_end.predict(feats)
        # no classifier: trust the clock alone
        return (
            Trigger.SEARCH_TIMEOUT_REACHED if feats[0] >= 0.999 else Trigger.SEARCH_COMPLETE
        )


def infer_state_timeline(population, frames, *, stats, search_end=None,
                         window: int = 3, config=None) -> InferredTimeline:
    """Predict a per-tick state timeline for every UAV in a frame stream.

    `stats` must be the normalization fitted on the training corpus. The
    first `window - 1` ticks carry no prediction (not enough motion history),
    so the timeline grid is the frame grid from tick `window - 1` on.
    """
    cfg = config if config is not None else frames.config
    area = cfg.area
    uav_ids = sorted({u for f in frames for u in f.uavs})
    states: dict[int, list[TimelineEntry]] = {}
    transitions: list[InferredTransition] = []

    for u in uav_ids:
        entries: list[TimelineEntry] = []
        phase_start = 0.0
        for i in range(window - 1, len(frames)):
            try:
                raw = derive_features(frames[i - window + 1 : i + 1], u, area)
            except WindowTooShort:
                continue
            label = predict(population, apply_normalization(raw, stats)).label
            t = frames[i].time
            if not entries:
                phase_start = t
            elif entries[-1].label != label:
                src = BehaviorState(entries[-1].label)
                dst = BehaviorState(label)
                ctx = _FrameContext(
                    battery=raw[4],
                    time=t,
                    phase_start=phase_start,
                    uav_id=u,
                    frames=frames,
                    config=cfg,
                    search_end=search_end,
                )
                trig, illegal = resolve_trigger(src, dst, ctx)
                transitions.append(
                    InferredTransition(
                        time=t,
                        uav_id=u,
                        source=src.value,
                        target=dst.value,
                        trigger=None if trig is None else trig.value,
                        illegal=illegal,
                    )
                )
                phase_start = t
            entries.append(TimelineEntry(time=t, label=label))
        states[u] = entries

    transitions.sort(key=lambda tr: (tr.time, tr.uav_id))
    return InferredTimeline(states=states, transitions=transitions)
