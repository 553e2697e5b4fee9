"""Feature derivation and min-max normalization.

The fixed feature vector: five raw channels read off the newest frame plus
two motion derivatives estimated by finite differences of position. f_turn
is |v x a| / max(|v|^2, eps), the instantaneous turn rate in rad/s (= v/r on
a circular arc), chosen because orbit, search-leg, and survey motion occupy
different bands of it.
"""

from dataclasses import dataclass

import numpy as np

from ..sim.config import Rect

FEATURE_NAMES: tuple[str, ...] = (
    "airspeed",
    "heading_rate",
    "altitude",
    "dist_boundary",
    "battery",
    "f_speed",
    "f_turn",
)


class WindowTooShort(Exception):
    pass


class EmptyDataset(Exception):
    pass


def derive_features(window, uav_id: int, area: Rect, eps: float = 1e-6) -> np.ndarray:
    """Raw (unnormalized) feature vector for `uav_id` at the window's last frame.

    Needs at least two frames holding distinct telemetry samples for the UAV;
    with only two, accelerations are zero, so f_turn is zero. Zero-order-hold
    repeats of one sample are collapsed before differencing.
    """
    samples = []
    for f in window:
        if uav_id not in f.uavs:
            raise WindowTooShort(f"uav {uav_id} absent from a window frame")
        s = f.uavs[uav_id]
        if not samples or s.time > samples[-1].time:
            samples.append(s)
    if len(samples) < 2:
        raise WindowTooShort("need at least two distinct telemetry samples")
    samples = samples[-3:]

    p = np.array([(s.x, s.y) for s in samples])
    t = np.array([s.time for s in samples])
    v1 = (p[-1] - p[-2]) / (t[-1] - t[-2])
    if len(samples) == 3:
        v0 = (p[-2] - p[-3]) / (t[-2] - t[-3])
        acc = (v1 - v0) / ((t[-1] - t[-3]) / 2.0)
    else:
        acc = np.zeros(2)
    f_speed = float(np.hypot(v1[0], v1[1]))
    f_turn = abs(v1[0] * acc[1] - v1[1] * acc[0]) / max(f_speed**2, eps)

    last = samples[-1]
    return np.array(
        [
            last.airspeed,
            last.heading_rate,
            last.altitude,
            area.signed_boundary_distance(last.x, last.y),
            last.battery,
            f_speed,
            f_turn,
        ],
        dtype=float,
    )


@dataclass(frozen=True)
class NormalizationStats:
    mins: np.ndarray
    maxs: np.ndarray

    def to_dict(self) -> dict:
        return {"mins": self.mins.tolist(), "maxs": self.maxs.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationStats":
        return cls(mins=np.asarray(d["mins"], float), maxs=np.asarray(d["maxs"], float))


def fit_normalization(dataset) -> NormalizationStats:
    """Per-feature min/max over the rows of a 2-D array."""
    X = np.asarray(dataset, dtype=float)
    if X.ndim != 2:
        raise ValueError("dataset must be 2-D (rows = instances)")
    if X.shape[0] == 0:
        raise EmptyDataset("cannot fit normalization on zero instances")
    return NormalizationStats(mins=X.min(axis=0), maxs=X.max(axis=0))


def apply_normalization(vector, stats: NormalizationStats) -> np.ndarray:
    """Min-max scale into [0,1]; out-of-range clamps; degenerate features -> 0.5."""
    x = np.asarray(vector, dtype=float)
    rng = stats.maxs - stats.mins
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (x - stats.mins) / rng
    out = np.where(rng > 0, out, 0.5)
    return np.clip(out, 0.0, 1.0)
