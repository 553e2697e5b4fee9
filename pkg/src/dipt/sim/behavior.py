"""Four-state behavior machine of the searching UAV and its transition triggers."""

from enum import Enum


class BehaviorState(str, Enum):
    HOLD = "Hold"
    FLY_ORBIT_AND_OBSERVE = "FlyOrbitAndObserve"
    FLY_SEARCH_PATTERN = "FlySearchPattern"
    SURVEY_TARGET = "SurveyTarget"


class Trigger(str, Enum):
    GO_FOR_LAUNCH = "GoForLaunch"
    FIRST_SEARCH_WAYPOINT_REACHED = "FirstSearchWaypointReached"
    LANDING_COMPLETE = "LandingComplete"
    POTENTIAL_TARGET_FOUND_AUCTION_WON = "PotentialTargetFoundAuctionWon"
    POTENTIAL_TARGET_FOUND_AUCTION_LOST = "PotentialTargetFoundAuctionLost"
    SEARCH_TIMEOUT_REACHED = "SearchTimeoutReached"
    SEARCH_COMPLETE = "SearchComplete"
    BATTERY_LOW = "BatteryLow"
    ABORT_MISSION = "AbortMission"
    SURVEY_COMPLETE = "SurveyComplete"
    POTENTIAL_TARGET_LOST = "PotentialTargetLost"


class InvalidTransition(Exception):
    """The (state, trigger) pair has no defined successor."""


_S = BehaviorState
_T = Trigger

# The 13 legal (state, trigger) -> successor pairs. The auction-lost trigger
# keeps the UAV searching (self-transition).
TRANSITIONS: dict[tuple[BehaviorState, Trigger], BehaviorState] = {
    (_S.HOLD, _T.GO_FOR_LAUNCH): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.FLY_ORBIT_AND_OBSERVE, _T.FIRST_SEARCH_WAYPOINT_REACHED): _S.FLY_SEARCH_PATTERN,
    (_S.FLY_ORBIT_AND_OBSERVE, _T.LANDING_COMPLETE): _S.HOLD,
    (_S.FLY_SEARCH_PATTERN, _T.POTENTIAL_TARGET_FOUND_AUCTION_WON): _S.SURVEY_TARGET,
    (_S.FLY_SEARCH_PATTERN, _T.SEARCH_TIMEOUT_REACHED): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.FLY_SEARCH_PATTERN, _T.SEARCH_COMPLETE): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.FLY_SEARCH_PATTERN, _T.BATTERY_LOW): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.FLY_SEARCH_PATTERN, _T.ABORT_MISSION): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.FLY_SEARCH_PATTERN, _T.POTENTIAL_TARGET_FOUND_AUCTION_LOST): _S.FLY_SEARCH_PATTERN,
    (_S.SURVEY_TARGET, _T.SURVEY_COMPLETE): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.SURVEY_TARGET, _T.BATTERY_LOW): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.SURVEY_TARGET, _T.ABORT_MISSION): _S.FLY_ORBIT_AND_OBSERVE,
    (_S.SURVEY_TARGET, _T.POTENTIAL_TARGET_LOST): _S.FLY_SEARCH_PATTERN,
}


def behavior_transition(state: BehaviorState, trigger: Trigger) -> BehaviorState:
    """Successor state for (state, trigger), or InvalidTransition."""
    try:
        return TRANSITIONS[(state, trigger)]
    except KeyError:
        raise InvalidTransition(f"no transition from {state.value} on {trigger.value}") from None


def outgoing_triggers(state: BehaviorState) -> tuple[Trigger, ...]:
    """Triggers that can fire from `state`, in declaration order."""
    return tuple(t for (s, t) in TRANSITIONS if s is state)


def triggers_for_edge(src: BehaviorState, dst: BehaviorState) -> tuple[Trigger, ...]:
    """All triggers mapping src to dst (empty when the edge is illegal)."""
    return tuple(t for (s, t), d in TRANSITIONS.items() if s is src and d is dst)
