"""Deterministic multi-UAV collaborative-search simulator (the truth source)."""

from .auction import EmptyAuction, run_auction
from .behavior import (
    TRANSITIONS,
    BehaviorState,
    InvalidTransition,
    Trigger,
    behavior_transition,
    outgoing_triggers,
    triggers_for_edge,
)
from .config import ConfigInvalid, Rect, ScenarioConfig, UavSpec
from .kinematics import (
    UavKinematicState,
    bearing_to,
    lawnmower_plan,
    step_kinematics,
    wrap_delta,
    wrap_heading,
)
from .mission import (
    EventKind,
    Outcome,
    RunLog,
    TelemetryRecord,
    TruthEvent,
    simulate,
    split_passes,
    verify_log,
)
from .sensing import ConfidenceClass, Detection, footprint_radius, sense_target

__all__ = [
    "BehaviorState",
    "ConfidenceClass",
    "ConfigInvalid",
    "Detection",
    "EmptyAuction",
    "EventKind",
    "InvalidTransition",
    "Outcome",
    "Rect",
    "RunLog",
    "ScenarioConfig",
    "TelemetryRecord",
    "TRANSITIONS",
    "TruthEvent",
    "Trigger",
    "UavKinematicState",
    "UavSpec",
    "bearing_to",
    "behavior_transition",
    "footprint_radius",
    "lawnmower_plan",
    "outgoing_triggers",
    "run_auction",
    "sense_target",
    "simulate",
    "split_passes",
    "step_kinematics",
    "triggers_for_edge",
    "verify_log",
    "wrap_delta",
    "wrap_heading",
]
