"""Rule firing, Karnik-Mendel type reduction, and the inference pipeline."""

from dataclasses import dataclass

import numpy as np

from .membership import DomainViolation, fuzzify, mf_centroid


class NoFiring(Exception):
    pass


def fire_rule(intervals) -> tuple[float, float]:
    """Firing interval of a rule: elementwise min over its antecedents."""
    lo = min(v[0] for v in intervals)
    up = min(v[1] for v in intervals)
    return (lo, up)


def km_type_reduce(centroids, intervals) -> tuple[float, float]:
    """Karnik-Mendel type reduction of weighted interval firings.

    Returns (y_l, y_r), the endpoints of the type-reduced interval. The KM
    procedure sorts consequent centroids and moves a switch point: left of it
    one endpoint of each firing interval is used, right of it the other. The
    converged switch point is exactly the one minimizing (resp. maximizing)
    the weighted average, so with the handful of consequents involved here we
    evaluate every switch position directly instead of iterating.
    """
    order = np.argsort(np.asarray(centroids, dtype=float), kind="stable")
    c = np.asarray(centroids, dtype=float)[order]
    lo = np.asarray([intervals[i][0] for i in order], dtype=float)
    up = np.asarray([intervals[i][1] for i in order], dtype=float)
    if not np.any(up > 0.0):
        raise NoFiring("no rule fired: all upper memberships are zero")
    n = len(c)
    y_l = np.inf
    y_r = -np.inf
    for m in range(n + 1):
        w_left = np.concatenate([up[:m], lo[m:]])
        s = w_left.sum()
        if s > 0.0:
            y_l = min(y_l, float((w_left * c).sum() / s))
        w_right = np.concatenate([lo[:m], up[m:]])
        s = w_right.sum()
        if s > 0.0:
            y_r = max(y_r, float((w_right * c).sum() / s))
    return (min(y_l, y_r), max(y_l, y_r))


def classify_score(score: float) -> str:
    """Map a [0,1] detection score to its linguistic class."""
    if score < 1.0 / 3.0:
        return "Poor"
    if score < 2.0 / 3.0:
        return "Marginal"
    return "Good"


@dataclass(frozen=True)
class PerceptionEstimate:
    score: float
    label: str
    y_l: float
    y_r: float
    no_firing: bool
    trace: dict


def infer(system, inputs: dict) -> PerceptionEstimate:
    """Run the full IT2 pipeline for one crisp input vector.

    Fuzzify each input, fire every rule, aggregate firings per consequent
    label by max, then KM-reduce the consequent centroids. When nothing
    fires the estimate falls back to a neutral 0.5 and flags it.
    """
    for var in system.inputs:
        if var.name not in inputs:
            raise DomainViolation(f"missing input: {var.name}")
    memberships = []
    for var in system.inputs:
        x = float(inputs[var.name])
        memberships.append(
            {
                label: fuzzify(x, mf, domain=var.domain)
                for label, mf in zip(var.labels, var.mfs)
            }
        )
    trace = {}
    grouped = {label: (0.0, 0.0) for label in system.output.labels}
    for rule in system.rules:
        firing = fire_rule(
            [memberships[i][label] for i, label in enumerate(rule.antecedent)]
        )
        trace[tuple(rule.antecedent)] = firing
        cur = grouped[rule.consequent]
        grouped[rule.consequent] = (max(cur[0], firing[0]), max(cur[1], firing[1]))

    centroids = [
        mf_centroid(mf) for mf in system.output.mfs
    ]
    intervals = [grouped[label] for label in system.output.labels]
    try:
        y_l, y_r = km_type_reduce(centroids, intervals)
        no_firing = False
    except NoFiring:
        y_l = y_r = 0.5
        no_firing = True
    score = (y_l + y_r) / 2.0
    return PerceptionEstimate(
        score=score,
        label=classify_score(score),
        y_l=y_l,
        y_r=y_r,
        no_firing=no_firing,
        trace=trace,
    )
