"""Point-mass kinematics: constant airspeed, rate-limited turns, compass headings."""

import math
from dataclasses import dataclass, replace

from .config import Rect


def wrap_heading(deg: float) -> float:
    """Wrap to [0, 360)."""
    h = deg % 360.0
    # the modulo of a tiny negative value can round up to exactly 360.0
    return 0.0 if h == 360.0 else h


def wrap_delta(deg: float) -> float:
    """Wrap a heading difference to [-180, 180)."""
    return (deg + 180.0) % 360.0 - 180.0


def bearing_to(x: float, y: float, wx: float, wy: float) -> float:
    """Compass bearing (0 = +y north, 90 = +x east) from (x, y) to (wx, wy)."""
    return wrap_heading(math.degrees(math.atan2(wx - x, wy - y)))


@dataclass(frozen=True)
class UavKinematicState:
    x: float
    y: float
    altitude: float
    heading: float  # degrees, [0, 360)
    heading_rate: float  # deg/s
    airspeed: float  # commanded cruise speed, m/s
    battery: float  # fraction of capacity


def step_kinematics(
    state: UavKinematicState,
    waypoint: tuple[float, float],
    dt: float,
    max_turn_deg_s: float = 20.0,
    battery_drain_per_s: float = 0.0,
) -> UavKinematicState:
    """Advance one step toward `waypoint`.

    Heading turns toward the waypoint bearing, limited to max_turn_deg_s * dt;
    position advances airspeed * dt along the new heading.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    want = bearing_to(state.x, state.y, waypoint[0], waypoint[1])
    delta = wrap_delta(want - state.heading)
    limit = max_turn_deg_s * dt
    turn = max(-limit, min(limit, delta))
    heading = wrap_heading(state.heading + turn)
    rad = math.radians(heading)
    return replace(
        state,
        x=state.x + state.airspeed * dt * math.sin(rad),
        y=state.y + state.airspeed * dt * math.cos(rad),
        heading=heading,
        heading_rate=wrap_delta(turn / dt),
        battery=max(0.0, state.battery - battery_drain_per_s * dt),
    )


def lawnmower_plan(area: Rect, pass_spacing: float) -> list[tuple[float, float]]:
    """Back-and-forth parallel passes covering the rectangle.

    Pass k runs along the y extent at x = area.x + k * pass_spacing (clamped to
    the right edge); consecutive passes alternate sweep direction. Two
    waypoints per pass.
    """
    if pass_spacing <= 0:
        raise ValueError("pass_spacing must be > 0")
    n_passes = int(area.width // pass_spacing) + 1
    y0, y1 = area.y, area.y + area.height
    waypoints: list[tuple[float, float]] = []
    for k in range(n_passes):
        x = min(area.x + k * pass_spacing, area.x + area.width)
        if k % 2 == 0:
            waypoints.extend([(x, y0), (x, y1)])
        else:
            waypoints.extend([(x, y1), (x, y0)])
    return waypoints
