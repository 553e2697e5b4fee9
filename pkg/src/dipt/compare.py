"""Truth-vs-inference comparison.

Everything the simulator knows (states, triggers, target position, detection
outcomes) is compared against what was inferred from telemetry alone:
geolocation error in meters, per-tick state agreement with a confusion
matrix, trigger attribution within a small tick tolerance, and perception
scores against actual detection outcomes. All functions are pure; reports
serialize to JSON documents for the CLI and the replay service.
"""

import math
from bisect import bisect_left
from dataclasses import dataclass, field

from enum import Enum

import numpy as np

from .formats import FORMAT_VERSION
from .lcs import InferredTimeline, TimelineEntry, InferredTransition
from .prep.labels import _state_at, _state_timelines
from .sim import (
    BehaviorState,
    EventKind,
    RunLog,
    Trigger,
    outgoing_triggers,
    triggers_for_edge,
)

STATE_ORDER = list(BehaviorState)


class GridMismatch(Exception):
    pass


class EmptyInput(Exception):
    pass


# -- geolocation ----------------------------------------------------------------


def geoloc_error(perceived, truth) -> float:
    """Euclidean distance in meters between two same-frame positions."""
    return math.hypot(perceived[0] - truth[0], perceived[1] - truth[1])


@dataclass(frozen=True)
class ComparisonRecord:
    time: float
    quantity: str
    truth: object
    inferred: object
    error: float


def geoloc_record(time: float, perceived, truth) -> ComparisonRecord:
    return ComparisonRecord(
        time=time,
        quantity="geolocation",
        truth=tuple(truth),
        inferred=tuple(perceived),
        error=geoloc_error(perceived, truth),
    )


# -- state timelines --------------------------------------------------------------


@dataclass(frozen=True)
class IllegalJump:
    time: float
    uav_id: int
    source: str
    target: str


@dataclass(frozen=True)
class StateAccuracyReport:
    accuracy: float
    confusion: np.ndarray
    trigger_accuracy: float
    trigger_total: int
    trigger_matched: int
    illegal_jumps: list
    n_frames: int

    def to_doc(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "state_report",
            "accuracy": self.accuracy,
            "states": [s.value for s in STATE_ORDER],
            "confusion": self.confusion.tolist(),
            "trigger_accuracy": self.trigger_accuracy,
            "trigger_total": self.trigger_total,
            "trigger_matched": self.trigger_matched,
            "n_frames": self.n_frames,
            "illegal_jumps": [
                {
                    "time": j.time,
                    "uav_id": j.uav_id,
                    "source": j.source,
                    "target": j.target,
                }
                for j in self.illegal_jumps
            ],
        }


def _check_grids(inferred: InferredTimeline, truth: InferredTimeline) -> dict:
    if set(inferred.states) != set(truth.states):
        raise GridMismatch(
            f"vehicle sets differ: {sorted(inferred.states)} vs {sorted(truth.states)}"
        )
    grids = {}
    for u in truth.states:
        a, b = inferred.states[u], truth.states[u]
        if len(a) != len(b):
            raise GridMismatch(f"uav {u}: {len(a)} ticks vs {len(b)}")
        for ea, eb in zip(a, b):
            if abs(ea.time - eb.time) > 1e-9:
                raise GridMismatch(
                    f"uav {u}: tick at {ea.time} vs {eb.time}"
                )
        grids[u] = [e.time for e in b]
    if not any(grids.values()):
        raise GridMismatch("empty timelines")
    return grids


def compare_states(
    inferred: InferredTimeline, truth: InferredTimeline, tol_ticks: int = 2
) -> StateAccuracyReport:
    """Per-tick state agreement plus trigger attribution at change points.

    A truth transition counts as matched when some inferred transition of
    the same vehicle carries the same trigger within tol_ticks grid ticks;
    each inferred transition can satisfy at most one truth transition.
    Inferred changes along no legal edge are returned as IllegalJump entries
    and take no part in the matching.
    """
    grids = _check_grids(inferred, truth)
    idx = {s.value: i for i, s in enumerate(STATE_ORDER)}
    confusion = np.zeros((len(STATE_ORDER), len(STATE_ORDER)), dtype=int)
    for u, grid in grids.items():
        for ea, eb in zip(inferred.states[u], truth.states[u]):
            confusion[idx[eb.label], idx[ea.label]] += 1
    n_frames = int(confusion.sum())
    accuracy = float(np.trace(confusion)) / n_frames

    def tick_of(u: int, t: float) -> int:
        return bisect_left(grids[u], t - 1e-9)

    illegal = []
    candidates = []
    for tr in sorted(inferred.transitions, key=lambda tr: (tr.time, tr.uav_id)):
        edge_ok = triggers_for_edge(
            BehaviorState(tr.source), BehaviorState(tr.target)
        )
        if tr.illegal or not edge_ok:
            illegal.append(
                IllegalJump(
                    time=tr.time, uav_id=tr.uav_id,
                    source=tr.source, target=tr.target,
                )
            )
        elif tr.trigger is not None:
            candidates.append(tr)

    used = [False] * len(candidates)
    matched = 0
    total = 0
    for tr in sorted(truth.transitions, key=lambda tr: (tr.time, tr.uav_id)):
        total += 1
        want = tick_of(tr.uav_id, tr.time)
        best = None
        for i, cand in enumerate(candidates):
            if used[i] or cand.uav_id != tr.uav_id or cand.trigger != tr.trigger:
                continue
            gap = abs(tick_of(cand.uav_id, cand.time) - want)
            if gap <= tol_ticks and (best is None or gap < best[0]):
                best = (gap, i)
        if best is not None:
            used[best[1]] = True
            matched += 1

    return StateAccuracyReport(
        accuracy=accuracy,
        confusion=confusion,
        trigger_accuracy=(matched / total) if total else 1.0,
        trigger_total=total,
        trigger_matched=matched,
        illegal_jumps=illegal,
        n_frames=n_frames,
    )


def truth_timeline(log: RunLog, frames, window: int = 3) -> InferredTimeline:
    """Ground-truth timeline on the same tick grid inference uses.

    States come from the truth event channel sampled at each frame tick from
    window-1 on; transitions are the state-change events snapped to the
    first tick at or after them. Changes landing on or before the first grid
    tick are not listed as transitions (there is no earlier tick for any
    timeline to differ from), they only shape the initial state.
    """
    timelines = _state_timelines(log)
    grid = [frames[i].time for i in range(window - 1, len(frames))]
    if not grid:
        raise GridMismatch("fewer frames than the feature window")
    uav_ids = sorted({r.uav_id for r in log.telemetry})
    states = {
        u: [TimelineEntry(time=t, label=_state_at(timelines.get(u, ([], [])), t)) for t in grid]
        for u in uav_ids
    }
    transitions = []
    prev = {u: BehaviorState.HOLD.value for u in uav_ids}
    for e in log.events:
        if e.kind is not EventKind.STATE_CHANGE or e.uav_id not in prev:
            continue
        source, target = prev[e.uav_id], e.state.value
        prev[e.uav_id] = target
        tick = bisect_left(grid, e.time - 1e-9)
        if 1 <= tick < len(grid):
            transitions.append(
                InferredTransition(
                    time=grid[tick], uav_id=e.uav_id, source=source,
                    target=target, trigger=e.trigger.value, illegal=False,
                )
            )
    transitions.sort(key=lambda tr: (tr.time, tr.uav_id))
    return InferredTimeline(states=states, transitions=transitions)


# -- trigger status ----------------------------------------------------------------


class TriggerStatus(str, Enum):
    INACTIVE = "Inactive"
    ARMED = "Armed"
    FIRED = "Fired"


def trigger_status(state: BehaviorState, fired: Trigger | None = None) -> dict:
    """Status of all eleven triggers given the currently inferred state.

    Outgoing edges of the state are Armed; on the tick a transition was
    inferred, the trigger that explained it is Fired (it belonged to the
    previous state's edges, so it may not be in the new Armed set).
    """
    armed = set(outgoing_triggers(state))
    out = {}
    for t in Trigger:
        if fired is not None and t is fired:
            out[t] = TriggerStatus.FIRED
        elif t in armed:
            out[t] = TriggerStatus.ARMED
        else:
            out[t] = TriggerStatus.INACTIVE
    return out


# -- perception scores ---------------------------------------------------------------


@dataclass(frozen=True)
class PerceptionRun:
    run_id: str
    estimate: object
    detected: bool
    inputs: dict | None = None


@dataclass(frozen=True)
class RuleActivation:
    antecedent: tuple
    f_lo: float
    f_up: float


@dataclass(frozen=True)
class PerRunScore:
    run_id: str
    score: float
    detected: bool
    no_firing: bool


@dataclass(frozen=True)
class PerceptionScoreReport:
    n_detected: int
    n_undetected: int
    mean_detected: float | None
    mean_undetected: float | None
    per_run: list
    digests: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "perception_report",
            "n_detected": self.n_detected,
            "n_undetected": self.n_undetected,
            "mean_detected": self.mean_detected,
            "mean_undetected": self.mean_undetected,
            "per_run": [
                {
                    "run_id": r.run_id,
                    "score": r.score,
                    "detected": r.detected,
                    "no_firing": r.no_firing,
                }
                for r in self.per_run
            ],
            "digests": {
                run_id: [
                    {
                        "antecedent": list(a.antecedent),
                        "f_lo": a.f_lo,
                        "f_up": a.f_up,
                    }
                    for a in activations
                ]
                for run_id, activations in self.digests.items()
            },
        }


def _digest(estimate, size: int = 3) -> list:
    ranked = sorted(estimate.trace.items(), key=lambda kv: (-kv[1][1], kv[0]))
    return [
        RuleActivation(antecedent=ante, f_lo=f[0], f_up=f[1])
        for ante, f in ranked[:size]
    ]


def fls_report(runs) -> PerceptionScoreReport:
    """Group runs by detection outcome; every failed detection gets a digest
    of the three strongest-firing rules as the explanation."""
    runs = list(runs)
    if not runs:
        raise EmptyInput("no runs to report on")
    per_run = [
        PerRunScore(
            run_id=r.run_id,
            score=r.estimate.score,
            detected=r.detected,
            no_firing=r.estimate.no_firing,
        )
        for r in runs
    ]
    detected = [r.score for r in per_run if r.detected]
    undetected = [r.score for r in per_run if not r.detected]
    digests = {r.run_id: _digest(r.estimate) for r in runs if not r.detected}
    return PerceptionScoreReport(
        n_detected=len(detected),
        n_undetected=len(undetected),
        mean_detected=(sum(detected) / len(detected)) if detected else None,
        mean_undetected=(sum(undetected) / len(undetected)) if undetected else None,
        per_run=per_run,
        digests=digests,
    )
