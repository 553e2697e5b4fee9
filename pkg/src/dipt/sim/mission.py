"""Deterministic multi-UAV collaborative-search mission engine.

One run: launch -> orbit -> lawnmower search (passes split across vehicles)
-> stochastic detections -> auction -> winner surveys the perceived target ->
survey complete / target lost -> return and land. All randomness flows from
per-UAV generators spawned off the scenario seed, so a (config, seed) pair
always produces the same log.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .auction import run_auction
from .behavior import BehaviorState, Trigger, behavior_transition
from .config import ScenarioConfig, UavSpec
from .kinematics import UavKinematicState, lawnmower_plan, step_kinematics
from .sensing import ConfidenceClass, Detection, footprint_radius, sense_target


@dataclass(frozen=True)
class TelemetryRecord:
    time: float
    uav_id: int
    x: float
    y: float
    altitude: float
    heading: float
    heading_rate: float
    airspeed: float
    battery: float


class EventKind(str, Enum):
    STATE_CHANGE = "state_change"
    DETECTION = "detection"
    AUCTION = "auction"
    PASS_COMPLETED = "pass_completed"


@dataclass(frozen=True)
class TruthEvent:
    time: float
    uav_id: int
    kind: EventKind
    state: BehaviorState | None = None
    trigger: Trigger | None = None
    detection: Detection | None = None
    winner: int | None = None
    bids: tuple[tuple[int, float], ...] | None = None
    pass_index: int | None = None


class Outcome(str, Enum):
    COMPLETED = "Completed"
    TIMED_OUT = "TimedOut"
    ABORTED = "Aborted"


@dataclass(frozen=True)
class RunLog:
    config: ScenarioConfig
    telemetry: tuple[TelemetryRecord, ...]
    events: tuple[TruthEvent, ...]
    outcome: Outcome

    @property
    def duration(self) -> float:
        return self.telemetry[-1].time if self.telemetry else 0.0


def split_passes(config: ScenarioConfig) -> list[list[tuple[float, float]]]:
    """Assign lawnmower passes round-robin across UAVs.

    Each UAV's own pass sequence alternates sweep direction. A UAV left
    without passes gets a single degenerate pass at the nearest area corner
    so it still runs the search phase.
    """
    full = lawnmower_plan(config.area, config.pass_spacing)
    passes = [full[2 * i : 2 * i + 2] for i in range(len(full) // 2)]
    n = len(config.uavs)
    plans: list[list[tuple[float, float]]] = [[] for _ in range(n)]
    for k, p in enumerate(passes):
        u = k % n
        lo, hi = sorted(p, key=lambda w: w[1])
        mine = len(plans[u]) // 2
        plans[u].extend([lo, hi] if mine % 2 == 0 else [hi, lo])
    for u, plan in enumerate(plans):
        if not plan:
            spec = config.uavs[u]
            corner = min(
                [
                    (config.area.x, config.area.y),
                    (config.area.x + config.area.width, config.area.y),
                    (config.area.x, config.area.y + config.area.height),
                    (config.area.x + config.area.width, config.area.y + config.area.height),
                ],
                key=lambda c: math.hypot(c[0] - spec.x, c[1] - spec.y),
            )
            plan.extend([corner, corner])
    return plans


def _orbit_waypoint(cx: float, cy: float, radius: float, kin: UavKinematicState, dt: float) -> tuple[float, float]:
    """Carrot point that pulls the vehicle onto a clockwise circle around (cx, cy)."""
    dx, dy = kin.x - cx, kin.y - cy
    if math.hypot(dx, dy) < 1e-9:
        ang = math.radians(kin.heading)
    else:
        ang = math.atan2(dx, dy)
    ang += max(2.0 * kin.airspeed * dt / radius, 0.35)
    return cx + radius * math.sin(ang), cy + radius * math.cos(ang)


class _Vehicle:
    """Mutable per-UAV mission state while the engine runs."""

    def __init__(self, uav_id: int, spec: UavSpec, plan: list[tuple[float, float]], config: ScenarioConfig):
        self.id = uav_id
        self.spec = spec
        self.plan = plan
        self.config = config
        heading = 0.0
        cx = config.area.x + config.area.width / 2.0
        cy = config.area.y + config.area.height / 2.0
        if math.hypot(cx - spec.x, cy - spec.y) > 1e-9:
            heading = math.degrees(math.atan2(cx - spec.x, cy - spec.y)) % 360.0
        self.kin = UavKinematicState(
            x=spec.x, y=spec.y, altitude=0.0, heading=heading,
            heading_rate=0.0, airspeed=spec.airspeed, battery=spec.battery,
        )
        self.cruise_alt = spec.altitude
        self.cruise_speed = spec.airspeed
        self.state = BehaviorState.HOLD
        self.launch = (spec.x, spec.y)
        self.orbit_elapsed = 0.0
        self.wp = 0
        self.passes_done = 0
        self.search_elapsed = 0.0
        self.returning = False
        self.survey_center: tuple[float, float] | None = None
        self.survey_elapsed = 0.0
        self.target_out_since: float | None = None
        self.aborted = False
        self.done = False

    @property
    def capture_radius(self) -> float:
        return max(1.5 * self.spec.airspeed * self.config.dt, 8.0)

    def at(self, point: tuple[float, float]) -> bool:
        return math.hypot(point[0] - self.kin.x, point[1] - self.kin.y) <= self.capture_radius


class _Engine:
    def __init__(self, config: ScenarioConfig):
        self.config = config
        plans = split_passes(config)
        self.vehicles = [_Vehicle(i, spec, plans[i], config) for i, spec in enumerate(config.uavs)]
        streams = np.random.SeedSequence(config.seed).spawn(len(config.uavs))
        self.rngs = [np.random.default_rng(s) for s in streams]
        self.telemetry: list[TelemetryRecord] = []
        self.events: list[TruthEvent] = []
        self._sub: dict[int, int] = {}
        self.t = 0.0

    # -- event plumbing ------------------------------------------------

    def _event_time(self, uav_id: int) -> float:
        sub = self._sub.get(uav_id, 0)
        self._sub[uav_id] = sub + 1
        return self.t + sub * (self.config.dt / 1024.0)

    def emit(self, uav_id: int, **kw) -> None:
        self.events.append(TruthEvent(time=self._event_time(uav_id), uav_id=uav_id, **kw))

    def change_state(self, v: _Vehicle, trigger: Trigger) -> None:
        prev = v.state
        v.state = behavior_transition(v.state, trigger)
        if prev is BehaviorState.SURVEY_TARGET and v.state is not prev:
            v.kin = replace(v.kin, airspeed=v.cruise_speed)
        self.emit(v.id, kind=EventKind.STATE_CHANGE, state=v.state, trigger=trigger)

    # -- per-tick logic ------------------------------------------------

    def _steer(self, v: _Vehicle, waypoint: tuple[float, float]) -> None:
        v.kin = step_kinematics(
            v.kin, waypoint, self.config.dt,
            max_turn_deg_s=self.config.max_turn_deg_s,
            battery_drain_per_s=self.config.battery_drain_per_s,
        )

    def _set_altitude(self, v: _Vehicle, target: float) -> None:
        dz = target - v.kin.altitude
        step = self.config.climb_rate_m_s * self.config.dt
        alt = target if abs(dz) <= step else v.kin.altitude + math.copysign(step, dz)
        if alt != v.kin.altitude:
            v.kin = replace(v.kin, altitude=alt)

    def _abort_due(self) -> bool:
        return self.config.abort_time_s is not None and self.t >= self.config.abort_time_s

    def step_vehicle(self, v: _Vehicle) -> None:
        cfg = self.config
        if v.state is BehaviorState.HOLD:
            if self._abort_due():
                v.aborted = True  # abort before launch keeps the vehicle on the ground
                v.done = True
            elif not v.done and self.t >= cfg.launch_delay_s:
                self.change_state(v, Trigger.GO_FOR_LAUNCH)
            return

        if self._abort_due() and not v.aborted:
            v.aborted = True
            if v.state in (BehaviorState.FLY_SEARCH_PATTERN, BehaviorState.SURVEY_TARGET):
                self.change_state(v, Trigger.ABORT_MISSION)
                v.returning = True
            else:
                v.returning = True  # orbit phase: no abort edge exists, just head home

        if v.state is BehaviorState.FLY_ORBIT_AND_OBSERVE:
            if v.returning:
                home = math.hypot(v.launch[0] - v.kin.x, v.launch[1] - v.kin.y)
                if home > cfg.landing_descent_radius_m:
                    # return leg flies a deconfliction altitude above cruise
                    self._set_altitude(v, v.cruise_alt + cfg.return_altitude_offset_m)
                    self._steer(v, v.launch)
                    return
                # spiral down over the launch point, touch down below 2 m
                self._set_altitude(v, 0.0)
                if v.kin.altitude <= 2.0:
                    v.kin = replace(v.kin, altitude=0.0)
                    self.change_state(v, Trigger.LANDING_COMPLETE)
                    v.done = True
                    return
                self._steer(v, _orbit_waypoint(v.launch[0], v.launch[1], cfg.orbit_radius_m / 2.0, v.kin, cfg.dt))
                return
            self._set_altitude(v, v.cruise_alt)
            if v.orbit_elapsed < cfg.orbit_duration_s:
                v.orbit_elapsed += cfg.dt
                self._steer(v, _orbit_waypoint(v.launch[0], v.launch[1], cfg.orbit_radius_m, v.kin, cfg.dt))
                return
            self._steer(v, v.plan[0])
            if v.at(v.plan[0]):
                self.change_state(v, Trigger.FIRST_SEARCH_WAYPOINT_REACHED)
                v.wp = 1
            return

        if v.state is BehaviorState.FLY_SEARCH_PATTERN:
            self._set_altitude(v, v.cruise_alt)
            v.search_elapsed += cfg.dt
            if v.kin.battery < cfg.battery_low_threshold:
                self.change_state(v, Trigger.BATTERY_LOW)
                v.returning = True
                return
            if v.search_elapsed >= cfg.search_timeout_s:
                self.change_state(v, Trigger.SEARCH_TIMEOUT_REACHED)
                v.returning = True
                return
            if v.at(v.plan[v.wp]):
                if v.wp % 2 == 1:
                    self.emit(v.id, kind=EventKind.PASS_COMPLETED, pass_index=v.passes_done)
                    v.passes_done += 1
                v.wp += 1
                if v.wp >= len(v.plan):
                    self.change_state(v, Trigger.SEARCH_COMPLETE)
                    v.returning = True
                    return
            self._steer(v, v.plan[v.wp])
            return

        if v.state is BehaviorState.SURVEY_TARGET:
            self._set_altitude(v, v.cruise_alt)
            v.survey_elapsed += cfg.dt
            if v.kin.battery < cfg.battery_low_threshold:
                self.change_state(v, Trigger.BATTERY_LOW)
                v.returning = True
                return
            if v.survey_elapsed >= cfg.survey_duration_s:
                self.change_state(v, Trigger.SURVEY_COMPLETE)
                v.returning = True
                return
            if v.target_out_since is not None and self.t - v.target_out_since >= cfg.survey_lost_s:
                self.change_state(v, Trigger.POTENTIAL_TARGET_LOST)
                v.survey_center = None
                v.target_out_since = None
                return
            assert v.survey_center is not None
            self._steer(v, _orbit_waypoint(v.survey_center[0], v.survey_center[1], cfg.survey_radius_m, v.kin, cfg.dt))
            return

    def camera_pass(self) -> None:
        cfg = self.config
        for v in self.vehicles:
            if v.state not in (BehaviorState.FLY_SEARCH_PATTERN, BehaviorState.SURVEY_TARGET):
                continue
            det = sense_target(v.kin, cfg, self.rngs[v.id], time=self._event_time(v.id), uav_id=v.id)
            if v.state is BehaviorState.SURVEY_TARGET:
                radius = footprint_radius(v.kin.altitude, cfg.camera_fov_deg)
                in_fp = math.hypot(cfg.target_x - v.kin.x, cfg.target_y - v.kin.y) <= radius
                if in_fp:
                    v.target_out_since = None
                elif v.target_out_since is None:
                    v.target_out_since = self.t
            if det is None:
                continue
            self.events.append(TruthEvent(time=det.time, uav_id=v.id, kind=EventKind.DETECTION, detection=det))
            if v.state is BehaviorState.SURVEY_TARGET:
                v.survey_center = (det.perceived_x, det.perceived_y)
                continue
            if det.confidence_class is ConfidenceClass.HIGH:
                self._hold_auction(det)

    def _hold_auction(self, det: Detection) -> None:
        bidders = [v for v in self.vehicles if v.state is BehaviorState.FLY_SEARCH_PATTERN]
        if not bidders:
            return
        bids = [
            (v.id, math.hypot(det.perceived_x - v.kin.x, det.perceived_y - v.kin.y) / max(v.kin.battery, 1e-6))
            for v in bidders
        ]
        winner = run_auction(bids)
        self.emit(winner, kind=EventKind.AUCTION, winner=winner, bids=tuple(bids))
        for v in bidders:
            if v.id == winner:
                self.change_state(v, Trigger.POTENTIAL_TARGET_FOUND_AUCTION_WON)
                v.kin = replace(v.kin, airspeed=v.cruise_speed * self.config.survey_speed_factor)
                v.survey_center = (det.perceived_x, det.perceived_y)
                v.survey_elapsed = 0.0
                v.target_out_since = None
            else:
                self.change_state(v, Trigger.POTENTIAL_TARGET_FOUND_AUCTION_LOST)

    # -- sampling ------------------------------------------------------

    def sample_telemetry(self) -> None:
        for v in self.vehicles:
            airborne = v.state is not BehaviorState.HOLD
            self.telemetry.append(
                TelemetryRecord(
                    time=self.t,
                    uav_id=v.id,
                    x=v.kin.x,
                    y=v.kin.y,
                    altitude=v.kin.altitude,
                    heading=v.kin.heading,
                    heading_rate=v.kin.heading_rate if airborne else 0.0,
                    airspeed=v.kin.airspeed if airborne else 0.0,
                    battery=v.kin.battery,
                )
            )

    # -- main loop -----------------------------------------------------

    def run(self) -> RunLog:
        cfg = self.config
        plan_len = sum(
            math.hypot(p[i + 1][0] - p[i][0], p[i + 1][1] - p[i][1])
            for p in (v.plan for v in self.vehicles)
            for i in range(len(p) - 1)
        )
        diag = math.hypot(cfg.area.width, cfg.area.height)
        slowest = min(u.airspeed for u in cfg.uavs)
        bound_s = (
            cfg.launch_delay_s + cfg.orbit_duration_s + (plan_len + 6 * diag + 400) / slowest
            + 3 * cfg.search_timeout_s + 20 * (cfg.survey_duration_s + cfg.survey_lost_s) + 300
        )
        max_ticks = int(bound_s / cfg.dt) + 1

        self.sample_telemetry()  # t = 0 snapshot, all vehicles holding
        tel_count = 0
        cam_count = 0
        for k in range(1, max_ticks + 1):
            self.t = k * cfg.dt
            self._sub = {}
            for v in self.vehicles:
                self.step_vehicle(v)
            c = int(self.t * cfg.camera_rate_hz + 1e-9)
            if c > cam_count:
                cam_count = c
                self.camera_pass()
            n = int(self.t * cfg.telemetry_rate_hz + 1e-9)
            if n > tel_count:
                tel_count = n
                self.sample_telemetry()
            if all(v.done for v in self.vehicles):
                break
        else:
            raise RuntimeError("simulation failed to terminate within its safety bound")

        events = sorted(self.events, key=lambda e: e.time)
        triggers = [e.trigger for e in events if e.kind is EventKind.STATE_CHANGE]
        if any(v.aborted for v in self.vehicles):
            outcome = Outcome.ABORTED
        elif Trigger.SURVEY_COMPLETE in triggers:
            outcome = Outcome.COMPLETED
        elif Trigger.SEARCH_TIMEOUT_REACHED in triggers:
            outcome = Outcome.TIMED_OUT
        else:
            outcome = Outcome.COMPLETED
        return RunLog(config=cfg, telemetry=tuple(self.telemetry), events=tuple(events), outcome=outcome)


def simulate(config: ScenarioConfig) -> RunLog:
    """Run one full mission; pure function of the config (seed included)."""
    config.validate()
    return _Engine(config).run()


def verify_log(log: RunLog) -> list[str]:
    """Contract check used by tests and the comparator: transition legality
    and strict per-UAV time ordering. Returns a list of violations."""
    problems: list[str] = []
    state: dict[int, BehaviorState] = {}
    last_event: dict[int, float] = {}
    for e in log.events:
        if last_event.get(e.uav_id, -math.inf) >= e.time:
            problems.append(f"event times not strictly increasing for uav {e.uav_id} at {e.time}")
        last_event[e.uav_id] = e.time
        if e.kind is EventKind.STATE_CHANGE:
            prev = state.get(e.uav_id, BehaviorState.HOLD)
            try:
                nxt = behavior_transition(prev, e.trigger)
            except Exception:
                problems.append(f"illegal trigger {e.trigger} from {prev} (uav {e.uav_id}, t={e.time})")
                continue
            if nxt is not e.state:
                problems.append(f"state {e.state} does not match transition target {nxt} at t={e.time}")
            state[e.uav_id] = e.state
    last_tel: dict[int, float] = {}
    last_batt: dict[int, float] = {}
    for r in log.telemetry:
        if last_tel.get(r.uav_id, -math.inf) >= r.time:
            problems.append(f"telemetry times not strictly increasing for uav {r.uav_id} at {r.time}")
        last_tel[r.uav_id] = r.time
        if r.battery > last_batt.get(r.uav_id, math.inf) + 1e-12:
            problems.append(f"battery increased for uav {r.uav_id} at {r.time}")
        last_batt[r.uav_id] = r.battery
    return problems
