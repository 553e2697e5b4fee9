"""Scenario configuration: geometry, sensing, vehicles, and run limits."""

from dataclasses import dataclass, field, asdict
from typing import Any


class ConfigInvalid(Exception):
    """Scenario configuration fails validation; message lists each problem."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in the local ENU plane (meters)."""

    x: float
    y: float
    width: float
    height: float

    def contains(self, px: float, py: float) -> bool:
        return self.x <= px <= self.x + self.width and self.y <= py <= self.y + self.height

    def signed_boundary_distance(self, px: float, py: float) -> float:
        """Distance to the boundary: positive inside, negative outside."""
        if self.contains(px, py):
            return min(px - self.x, self.x + self.width - px, py - self.y, self.y + self.height - py)
        dx = max(self.x - px, 0.0, px - (self.x + self.width))
        dy = max(self.y - py, 0.0, py - (self.y + self.height))
        return -((dx * dx + dy * dy) ** 0.5)


@dataclass(frozen=True)
class UavSpec:
    """Per-vehicle launch parameters."""

    x: float
    y: float
    altitude: float
    airspeed: float
    battery: float = 1.0


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 0
    area: Rect = field(default_factory=lambda: Rect(0.0, 0.0, 600.0, 500.0))
    pass_spacing: float = 100.0
    target_x: float = 300.0
    target_y: float = 250.0
    target_size: float = 3.0
    visibility: float = 0.9
    light_level: float = 0.9
    camera_fov_deg: float = 70.0
    camera_rate_hz: float = 2.0
    detection_base_prob: float = 0.7
    confidence_threshold: float = 0.45
    uavs: tuple[UavSpec, ...] = (UavSpec(-80.0, -80.0, 100.0, 20.0),)
    search_timeout_s: float = 240.0
    battery_low_threshold: float = 0.2
    telemetry_rate_hz: float = 2.0
    dt: float = 0.5
    # Defaulted constants not tied to a specific mission (documented in README).
    max_turn_deg_s: float = 25.0
    battery_drain_per_s: float = 2e-4
    geoloc_noise_sigma_m: float = 5.0
    launch_delay_s: float = 2.0
    orbit_radius_m: float = 120.0
    orbit_duration_s: float = 10.0
    survey_radius_m: float = 35.0
    survey_speed_factor: float = 0.6
    survey_duration_s: float = 20.0
    survey_lost_s: float = 6.0
    climb_rate_m_s: float = 8.0
    return_altitude_offset_m: float = 30.0
    landing_descent_radius_m: float = 150.0
    abort_time_s: float | None = None

    def validate(self) -> None:
        problems: list[str] = []
        if self.dt <= 0:
            problems.append("dt must be > 0")
        for name in ("camera_rate_hz", "telemetry_rate_hz"):
            if getattr(self, name) <= 0:
                problems.append(f"{name} must be > 0")
        for name in ("visibility", "light_level", "detection_base_prob", "battery_low_threshold"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                problems.append(f"{name} must be in [0, 1], got {v}")
        if self.pass_spacing <= 0:
            problems.append("pass_spacing must be > 0")
        if self.area.width <= 0 or self.area.height <= 0:
            problems.append("area must have positive width and height")
        if not self.uavs:
            problems.append("at least one UAV is required")
        for i, u in enumerate(self.uavs):
            if u.airspeed <= 0:
                problems.append(f"uav {i}: airspeed must be > 0")
            if u.altitude <= 0:
                problems.append(f"uav {i}: altitude must be > 0")
            if not 0.0 <= u.battery <= 1.0:
                problems.append(f"uav {i}: battery must be in [0, 1]")
        if self.search_timeout_s <= 0:
            problems.append("search_timeout_s must be > 0")
        if not 0.0 < self.survey_speed_factor <= 1.0:
            problems.append("survey_speed_factor must be in (0, 1]")
        if self.climb_rate_m_s <= 0:
            problems.append("climb_rate_m_s must be > 0")
        if not 0 <= self.seed < 2**64:
            problems.append("seed must fit in 64 unsigned bits")
        if problems:
            raise ConfigInvalid("; ".join(problems))

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["area"] = {"x": self.area.x, "y": self.area.y, "width": self.area.width, "height": self.area.height}
        d["uavs"] = [asdict(u) for u in self.uavs]
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ScenarioConfig":
        d = dict(d)
        d["area"] = Rect(**d["area"])
        d["uavs"] = tuple(UavSpec(**u) for u in d["uavs"])
        return cls(**d)
