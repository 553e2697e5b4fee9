"""Binary classifier separating the two undetected search endings.

A search phase that ends without a detection win, battery event, or abort
ended either because the clock ran out or because every pass finished. The
classifier scores three run-summary features: elapsed-search/timeout ratio,
completed pass fraction, and the alignment between the final heading and the
current search leg. Logistic regression fit by full-batch gradient descent
from a zero initialization, so training is deterministic.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..sim import ScenarioConfig, Trigger, bearing_to, split_passes, wrap_delta


def search_end_features(telemetry, config: ScenarioConfig, uav_id: int,
                        fsp_seconds: float, t_end: float) -> np.ndarray:
    """(elapsed/timeout ratio, completed pass fraction, final leg alignment).

    `telemetry` is this UAV's records; only samples at or before t_end count.
    Pass progress is re-derived by walking the UAV's share of the lawnmower
    plan with the same capture radius the vehicles use.
    """
    plan = split_passes(config)[uav_id]
    spec = config.uavs[uav_id]
    radius = max(1.5 * spec.airspeed * config.dt, 8.0)
    recs = [r for r in telemetry if r.uav_id == uav_id and r.time <= t_end + 1e-9]
    recs.sort(key=lambda r: r.time)

    v = 0
    for r in recs:
        while v < len(plan) and math.hypot(plan[v][0] - r.x, plan[v][1] - r.y) <= radius:
            v += 1
    n_passes = len(plan) // 2
    fraction = min(1.0, (v // 2) / n_passes) if n_passes else 1.0

    ratio = fsp_seconds / config.search_timeout_s if config.search_timeout_s > 0 else 0.0

    alignment = 0.0
    if recs:
        if v >= len(plan):
            a, b = plan[-2], plan[-1]
        elif v == 0:
            a, b = plan[0], plan[1]
        else:
            a, b = plan[v - 1], plan[v]
        if (a[0], a[1]) != (b[0], b[1]):
            leg = bearing_to(a[0], a[1], b[0], b[1])
            alignment = math.cos(math.radians(wrap_delta(leg - recs[-1].heading)))
    return np.array([ratio, fraction, alignment], dtype=float)


@dataclass(frozen=True)
class SearchEndClassifier:
    weights: np.ndarray  # bias + one weight per feature

    @classmethod
    def fit(cls, X, y, lr: float = 0.5, iterations: int = 3000) -> "SearchEndClassifier":
        """y entries are the two trigger values; 1 = SearchTimeoutReached."""
        X = np.asarray(X, dtype=np.float64)
        t = np.array([1.0 if v == Trigger.SEARCH_TIMEOUT_REACHED.value else 0.0 for v in y])
        Xb = np.hstack([np.ones((X.shape[0], 1)), X])
        w = np.zeros(Xb.shape[1])
        for _ in range(iterations):
            p = 1.0 / (1.0 + np.exp(-(Xb @ w)))
            w -= lr * (Xb.T @ (p - t)) / len(t)
        return cls(weights=w)

    def decision(self, features) -> float:
        """Probability of SearchTimeoutReached."""
        x = np.concatenate([[1.0], np.asarray(features, dtype=np.float64)])
        return float(1.0 / (1.0 + np.exp(-(x @ self.weights))))

    def predict(self, features) -> Trigger:
        return (
            Trigger.SEARCH_TIMEOUT_REACHED
            if self.decision(features) >= 0.5
            else Trigger.SEARCH_COMPLETE
        )

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "SearchEndClassifier":
        return cls(weights=np.asarray(d["weights"], dtype=np.float64))
