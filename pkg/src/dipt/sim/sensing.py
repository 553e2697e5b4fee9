"""Stochastic stand-in for onboard target detection.

The camera sees a circular ground footprint under the vehicle; detection is a
Bernoulli draw whose probability scales with visibility and light level, and
the reported target position carries Gaussian geolocation noise.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import ScenarioConfig
from .kinematics import UavKinematicState


class ConfidenceClass(str, Enum):
    LOW = "Low"
    HIGH = "High"


@dataclass(frozen=True)
class Detection:
    time: float
    uav_id: int
    confidence: float
    confidence_class: ConfidenceClass
    perceived_x: float
    perceived_y: float


def footprint_radius(altitude: float, fov_deg: float) -> float:
    return altitude * math.tan(math.radians(fov_deg) / 2.0)


def sense_target(
    uav: UavKinematicState,
    config: ScenarioConfig,
    rng: np.random.Generator,
    time: float = 0.0,
    uav_id: int = 0,
) -> Detection | None:
    """One camera tick: a Detection, or None when the target goes unseen."""
    radius = footprint_radius(uav.altitude, config.camera_fov_deg)
    dist = math.hypot(config.target_x - uav.x, config.target_y - uav.y)
    if dist > radius:
        return None
    p = config.detection_base_prob * config.visibility * config.light_level
    if rng.random() >= p:
        return None
    confidence = max(0.0, min(1.0, 1.0 - dist / radius)) * config.visibility
    noise = rng.normal(0.0, config.geoloc_noise_sigma_m, size=2)
    cls = ConfidenceClass.HIGH if confidence >= config.confidence_threshold else ConfidenceClass.LOW
    return Detection(
        time=time,
        uav_id=uav_id,
        confidence=confidence,
        confidence_class=cls,
        perceived_x=config.target_x + noise[0],
        perceived_y=config.target_y + noise[1],
    )
