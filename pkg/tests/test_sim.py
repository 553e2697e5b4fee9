"""Sensing, auction, and full-mission simulation contracts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dipt.sim import (
    ConfidenceClass,
    EmptyAuction,
    EventKind,
    Outcome,
    Rect,
    RunLog,
    ScenarioConfig,
    Trigger,
    UavKinematicState,
    UavSpec,
    footprint_radius,
    run_auction,
    sense_target,
    simulate,
    split_passes,
    verify_log,
)


def _uav_over(x, y, altitude=100.0):
    return UavKinematicState(
        x=x, y=y, altitude=altitude, heading=0.0, heading_rate=0.0,
        airspeed=20.0, battery=1.0,
    )


def _triggers(log: RunLog, uav_id=None):
    return [
        e.trigger
        for e in log.events
        if e.kind is EventKind.STATE_CHANGE and (uav_id is None or e.uav_id == uav_id)
    ]


def _detections(log: RunLog):
    return [e.detection for e in log.events if e.kind is EventKind.DETECTION]


# -- sensing ----------------------------------------------------------------


def test_footprint_radius():
    assert footprint_radius(100.0, 90.0) == pytest.approx(100.0)
    assert footprint_radius(100.0, 60.0) == pytest.approx(100.0 * math.tan(math.radians(30.0)))


def test_sense_outside_footprint_is_none():
    cfg = ScenarioConfig(target_x=0.0, target_y=0.0, detection_base_prob=1.0,
                         visibility=1.0, light_level=1.0)
    rng = np.random.default_rng(0)
    far = footprint_radius(100.0, cfg.camera_fov_deg) + 1.0
    assert sense_target(_uav_over(far, 0.0), cfg, rng, time=1.0, uav_id=0) is None


def test_sense_zero_visibility_is_none():
    cfg = ScenarioConfig(target_x=0.0, target_y=0.0, detection_base_prob=1.0,
                         visibility=0.0, light_level=1.0)
    rng = np.random.default_rng(0)
    for _ in range(200):
        assert sense_target(_uav_over(0.0, 0.0), cfg, rng, time=1.0, uav_id=0) is None


def test_sense_monte_carlo_frequency():
    """p = base x visibility x light = 0.6; 10k seeded trials land in 0.6 +/- 0.02."""
    cfg = ScenarioConfig(target_x=0.0, target_y=0.0, detection_base_prob=0.6,
                         visibility=1.0, light_level=1.0)
    rng = np.random.default_rng(1234)
    hits = sum(
        sense_target(_uav_over(0.0, 0.0), cfg, rng, time=float(i), uav_id=0) is not None
        for i in range(10_000)
    )
    assert abs(hits / 10_000 - 0.6) <= 0.02


def test_sense_confidence_formula_and_class():
    cfg = ScenarioConfig(target_x=0.0, target_y=0.0, detection_base_prob=1.0,
                         visibility=0.8, light_level=1.0, confidence_threshold=0.45)
    rng = np.random.default_rng(7)
    radius = footprint_radius(100.0, cfg.camera_fov_deg)
    for frac in (0.0, 0.25, 0.5, 0.9):
        det = sense_target(_uav_over(frac * radius, 0.0), cfg, rng, time=0.0, uav_id=3)
        assert det is not None
        expected = (1.0 - frac) * 0.8
        assert det.confidence == pytest.approx(expected, abs=1e-12)
        assert (det.confidence_class is ConfidenceClass.HIGH) == (det.confidence >= 0.45)
        assert det.uav_id == 3


def test_sense_perceived_position_is_noisy_but_unbiased():
    cfg = ScenarioConfig(target_x=50.0, target_y=-20.0, detection_base_prob=1.0,
                         visibility=1.0, light_level=1.0, geoloc_noise_sigma_m=5.0)
    rng = np.random.default_rng(99)
    xs, ys = [], []
    for i in range(4000):
        det = sense_target(_uav_over(50.0, -20.0), cfg, rng, time=float(i), uav_id=0)
        xs.append(det.perceived_x)
        ys.append(det.perceived_y)
    # mean within 4 sigma of the truth, spread close to the configured sigma
    assert abs(np.mean(xs) - 50.0) < 4 * 5.0 / math.sqrt(len(xs))
    assert abs(np.mean(ys) + 20.0) < 4 * 5.0 / math.sqrt(len(ys))
    assert 4.0 < np.std(xs) < 6.0


# -- auction ----------------------------------------------------------------


def test_auction_single_bidder():
    assert run_auction([(1, 5.0)]) == 1


def test_auction_minimum_cost_wins():
    assert run_auction([(1, 5.0), (2, 3.2)]) == 2


def test_auction_tie_breaks_by_lowest_id():
    assert run_auction([(2, 4.0), (1, 4.0)]) == 1


def test_auction_empty_raises():
    with pytest.raises(EmptyAuction):
        run_auction([])


# -- pass splitting -----------------------------------------------------------


def test_split_passes_round_robin_covers_plan():
    cfg = ScenarioConfig(uavs=(UavSpec(-80, -80, 100, 20), UavSpec(700, 560, 100, 20)))
    plans = split_passes(cfg)
    assert len(plans) == 2
    xs = sorted(x for plan in plans for x in {w[0] for w in plan})
    assert xs == [0.0, 100.0, 200.0, 300.0, 400.0, 500.0, 600.0]


def test_split_passes_degenerate_corner_for_extra_uav():
    cfg = ScenarioConfig(
        area=Rect(0, 0, 100, 100), pass_spacing=200.0,
        uavs=(UavSpec(-10, -10, 100, 20), UavSpec(120, 120, 100, 20)),
    )
    plans = split_passes(cfg)
    assert len(plans[0]) == 2  # the single real pass
    assert plans[1] == [(100.0, 100.0), (100.0, 100.0)]  # nearest corner, degenerate


# -- full missions ------------------------------------------------------------


def test_simulate_default_reaches_survey_and_lands():
    log = simulate(ScenarioConfig(seed=3))
    assert verify_log(log) == []
    t = _triggers(log)
    assert t[0] is Trigger.GO_FOR_LAUNCH
    assert Trigger.POTENTIAL_TARGET_FOUND_AUCTION_WON in t
    assert Trigger.SURVEY_COMPLETE in t
    assert t[-1] is Trigger.LANDING_COMPLETE
    assert log.outcome is Outcome.COMPLETED


def test_simulate_deterministic_repeat():
    for seed in (0, 11):
        cfg = ScenarioConfig(seed=seed)
        assert simulate(cfg) == simulate(cfg)


def test_simulate_timeout_sequence():
    """Target unreachable and timeout shorter than the plan forces
    SearchTimeoutReached then LandingComplete."""
    cfg = ScenarioConfig(seed=7, target_x=5000.0, target_y=5000.0, search_timeout_s=60.0)
    log = simulate(cfg)
    assert verify_log(log) == []
    assert log.outcome is Outcome.TIMED_OUT
    assert _triggers(log)[-2:] == [Trigger.SEARCH_TIMEOUT_REACHED, Trigger.LANDING_COMPLETE]


def test_simulate_zero_detection_prob_completes_search():
    cfg = ScenarioConfig(seed=2, detection_base_prob=0.0)
    log = simulate(cfg)
    assert _detections(log) == []
    assert log.outcome is Outcome.COMPLETED
    assert Trigger.SEARCH_COMPLETE in _triggers(log)


def test_simulate_abort_mid_search():
    cfg = ScenarioConfig(seed=7, abort_time_s=60.0)
    log = simulate(cfg)
    assert log.outcome is Outcome.ABORTED
    assert Trigger.ABORT_MISSION in _triggers(log)
    assert _triggers(log)[-1] is Trigger.LANDING_COMPLETE


def test_simulate_abort_before_launch_keeps_hold():
    cfg = ScenarioConfig(seed=7, abort_time_s=1.0, launch_delay_s=2.0)
    log = simulate(cfg)
    assert log.outcome is Outcome.ABORTED
    assert _triggers(log) == []
    assert all(r.airspeed == 0.0 and r.altitude == 0.0 for r in log.telemetry)


def test_simulate_battery_low_returns_home():
    cfg = ScenarioConfig(
        seed=7, battery_drain_per_s=1e-3,
        uavs=(UavSpec(-80.0, -80.0, 100.0, 20.0, battery=0.22),),
    )
    log = simulate(cfg)
    assert Trigger.BATTERY_LOW in _triggers(log)
    assert _triggers(log)[-1] is Trigger.LANDING_COMPLETE


def test_simulate_multi_uav_auction_has_winner_and_losers():
    cfg = ScenarioConfig(
        seed=5,
        uavs=(UavSpec(-80, -80, 100, 20), UavSpec(700, -60, 110, 22), UavSpec(-60, 560, 90, 18)),
    )
    log = simulate(cfg)
    assert verify_log(log) == []
    auctions = [e for e in log.events if e.kind is EventKind.AUCTION]
    assert auctions, "expected at least one auction"
    first = auctions[0]
    assert len(first.bids) >= 2
    assert first.winner == min(first.bids, key=lambda b: (b[1], b[0]))[0]
    t = [x for x in _triggers(log)]
    assert Trigger.POTENTIAL_TARGET_FOUND_AUCTION_WON in t
    assert Trigger.POTENTIAL_TARGET_FOUND_AUCTION_LOST in t


def test_simulate_survey_slows_the_winner():
    log = simulate(ScenarioConfig(seed=3))
    won = next(
        e.time for e in log.events
        if e.kind is EventKind.STATE_CHANGE and e.trigger is Trigger.POTENTIAL_TARGET_FOUND_AUCTION_WON
    )
    done = next(
        e.time for e in log.events
        if e.kind is EventKind.STATE_CHANGE and e.trigger is Trigger.SURVEY_COMPLETE
    )
    seg = [r for r in log.telemetry if won + 2.0 < r.time < done]
    assert seg and all(r.airspeed == pytest.approx(20.0 * 0.6) for r in seg)


def test_simulate_rejects_invalid_config():
    from dipt.sim import ConfigInvalid

    with pytest.raises(ConfigInvalid):
        simulate(ScenarioConfig(dt=0.0))
    with pytest.raises(ConfigInvalid):
        simulate(ScenarioConfig(uavs=()))
    with pytest.raises(ConfigInvalid):
        simulate(ScenarioConfig(visibility=1.5))


# -- log-level invariants over randomized scenarios ---------------------------


@st.composite
def _scenarios(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    width = draw(st.floats(150.0, 400.0))
    height = draw(st.floats(150.0, 400.0))
    spacing = draw(st.floats(60.0, 150.0))
    inside = draw(st.booleans())
    tx = draw(st.floats(0.1, 0.9)) * width if inside else width + 500.0
    ty = draw(st.floats(0.1, 0.9)) * height if inside else height + 500.0
    n = draw(st.integers(1, 2))
    uavs = tuple(
        UavSpec(x=-60.0 - 30.0 * i, y=-60.0, altitude=draw(st.floats(60.0, 130.0)),
                airspeed=draw(st.floats(12.0, 25.0)), battery=draw(st.floats(0.5, 1.0)))
        for i in range(n)
    )
    abort = draw(st.one_of(st.none(), st.floats(10.0, 120.0)))
    return ScenarioConfig(
        seed=seed, area=Rect(0.0, 0.0, width, height), pass_spacing=spacing,
        target_x=tx, target_y=ty, uavs=uavs,
        search_timeout_s=draw(st.floats(40.0, 400.0)), abort_time_s=abort,
    )


@given(cfg=_scenarios())
@settings(max_examples=25, deadline=None)
def test_random_scenarios_satisfy_log_invariants(cfg):
    log = simulate(cfg)
    assert verify_log(log) == []
    assert log.outcome in (Outcome.COMPLETED, Outcome.TIMED_OUT, Outcome.ABORTED)
    thr = cfg.confidence_threshold
    for det in _detections(log):
        assert 0.0 <= det.confidence <= 1.0
        assert (det.confidence_class is ConfidenceClass.HIGH) == (det.confidence >= thr)
    per_uav = {}
    for r in log.telemetry:
        assert abs(r.heading_rate) <= cfg.max_turn_deg_s + 1e-9
        per_uav.setdefault(r.uav_id, []).append(r)
    assert set(per_uav) == set(range(len(cfg.uavs)))
