"""Interval type-2 trapezoidal membership functions.

An IT2 set is a pair of trapezoids: the upper function at height 1 and a
lower function scaled by h, contained inside the upper one. Membership of a
crisp value is the interval between the two evaluations; the footprint of
uncertainty is their gap.
"""

from dataclasses import dataclass


class DomainViolation(Exception):
    pass


def trap_value(x: float, trap, height: float = 1.0) -> float:
    """Piecewise trapezoid evaluation; degenerate edges are vertical."""
    a, b, c, d = trap
    if x < a or x > d:
        return 0.0
    if b <= x <= c:
        return height
    if x < b:
        return height * (x - a) / (b - a)
    return height * (d - x) / (d - c)


def trap_centroid(trap) -> float:
    """Analytic area centroid; independent of the trapezoid's height."""
    a, b, c, d = trap
    if d == a:
        return a
    rise = (b - a) / 2.0
    plat = c - b
    fall = (d - c) / 2.0
    area = rise + plat + fall
    if area == 0.0:
        return (a + d) / 2.0
    num = (
        rise * (a + 2.0 * (b - a) / 3.0)
        + plat * (b + c) / 2.0
        + fall * (c + (d - c) / 3.0)
    )
    return num / area


@dataclass(frozen=True)
class IT2TrapMF:
    upper: tuple[float, float, float, float]
    lower: tuple[float, float, float, float]
    h: float = 1.0

    def __post_init__(self):
        a, b, c, d = self.upper
        a2, b2, c2, d2 = self.lower
        if not a <= b <= c <= d:
            raise ValueError(f"upper trapezoid not ordered: {self.upper}")
        if not a2 <= b2 <= c2 <= d2:
            raise ValueError(f"lower trapezoid not ordered: {self.lower}")
        if not (a <= a2 and b <= b2 and c2 <= c and d2 <= d):
            raise ValueError("lower trapezoid must sit inside the upper one")
        if not 0.0 < self.h <= 1.0:
            raise ValueError(f"lower height h must be in (0, 1], got {self.h}")


def fuzzify(x: float, mf: IT2TrapMF, domain=None) -> tuple[float, float]:
    """Membership interval [mu_lower, mu_upper] of x in mf."""
    if domain is not None and not domain[0] <= x <= domain[1]:
        raise DomainViolation(f"input {x} outside domain [{domain[0]}, {domain[1]}]")
    up = trap_value(x, mf.upper)
    lo = mf.h * trap_value(x, mf.lower)
    # containment holds by the MF invariants; guard against float dust
    return (min(lo, up), up)


def mf_centroid(mf: IT2TrapMF) -> float:
    """Crisp centroid of an IT2 set: midpoint of its two trapezoid centroids."""
    return (trap_centroid(mf.upper) + trap_centroid(mf.lower)) / 2.0
