"""Supervised correct-set training loop.

Each iteration: sample an instance, form the match set, update match-set
experience and correct counts, cover when no matching rule has the right
action, periodically run a GA in the correct set, and delete down to the
micro-population bound. Everything is driven by one seeded generator, so a
(dataset, params) pair reproduces bit-for-bit.
"""

from dataclasses import dataclass, field

import numpy as np

from .._kernels import match_one
from ..prep import EmptyDataset
from .params import LcsParams
from .population import ArityMismatch, Population


@dataclass
class TrainReport:
    curve: list[tuple[int, float]] = field(default_factory=list)
    macro: int = 0
    micro: int = 0
    covering_events: int = 0
    ga_events: int = 0
    subsumption_events: int = 0
    seed: int = 0
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "curve": [[i, a] for i, a in self.curve],
            "macro": self.macro,
            "micro": self.micro,
            "covering_events": self.covering_events,
            "ga_events": self.ga_events,
            "subsumption_events": self.subsumption_events,
            "seed": self.seed,
            "iterations": self.iterations,
        }


def matches(pop: Population, i: int, x) -> bool:
    """Does rule i match instance x (inclusive interval bounds)?"""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape[0] != pop.n_features:
        raise ArityMismatch(f"instance arity {x.shape[0]} != condition arity {pop.n_features}")
    return bool(
        match_one(
            np.ascontiguousarray(pop.lo[i : i + 1]),
            np.ascontiguousarray(pop.hi[i : i + 1]),
            np.ascontiguousarray(pop.mask[i : i + 1]),
            x,
        )[0]
    )


def cover(x, params: LcsParams, rng) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Condition arrays for a covering rule centered on x.

    Each attribute is DontCare with probability p_dontcare, else an interval
    [x-u, x+u] with u drawn from (0, s0], clamped to [0,1].
    """
    n = len(x)
    dontcare = rng.random(n) < params.p_dontcare
    u = params.s0 * (1.0 - rng.random(n))  # in (0, s0]
    lo = np.clip(x - u, 0.0, 1.0)
    hi = np.clip(x + u, 0.0, 1.0)
    mask = (~dontcare).astype(np.uint8)
    lo[dontcare] = 0.0
    hi[dontcare] = 1.0
    return lo, hi, mask


def _vote_label(pop: Population, matched: np.ndarray) -> str | None:
    """Vote-winning label over matched rule indices, None when empty."""
    if len(matched) == 0:
        return None
    w = pop.fitness[matched] * pop.numerosity[matched] * (2.0 - pop.generality[matched])
    votes = np.bincount(pop.action[matched], weights=w, minlength=len(pop.labels))
    best = votes.max()
    for k in np.argsort(pop.labels):  # lexicographic tie-break
        if votes[k] == best:
            return pop.labels[k]
    return None


def _subsumes(pop: Population, parent: int, lo, hi, mask, params: LcsParams) -> bool:
    if pop.experience[parent] <= params.theta_sub:
        return False
    if pop.correct[parent] < params.subsumption_accuracy * pop.experience[parent]:
        return False
    pm, cm = pop.mask[parent], mask
    general = (pm == 0) | ((cm == 1) & (pop.lo[parent] <= lo) & (pop.hi[parent] >= hi))
    if not general.all():
        return False
    # strictly more general or equal, and at least as general everywhere
    return bool((pm <= cm).all())


def _insert(pop: Population, lo, hi, mask, action: int, birth: int) -> None:
    j = pop.find_identical(lo, hi, mask, action)
    if j >= 0:
        pop.numerosity[j] += 1
    else:
        pop.append_rule(lo, hi, mask, action, 1, 1, 1, birth)


def _delete_to_bound(pop: Population, params: LcsParams, rng) -> None:
    while pop.n_micro > params.N and pop.n_macro > 0:
        fit = pop.fitness
        w = pop.numerosity.astype(np.float64)
        seasoned = pop.experience >= params.theta_del
        w[seasoned] = w[seasoned] / (fit[seasoned] + 1e-6)
        cum = np.cumsum(w)
        r = rng.random() * cum[-1]
        pick = int(np.searchsorted(cum, r, side="right"))
        pick = min(pick, pop.n_macro - 1)
        pop.numerosity[pick] -= 1
        if pop.numerosity[pick] == 0:
            keep = np.ones(pop.n_macro, dtype=bool)
            keep[pick] = False
            sub = pop.select(np.flatnonzero(keep))
            pop.lo, pop.hi, pop.mask = sub.lo, sub.hi, sub.mask
            pop.action, pop.experience, pop.correct = sub.action, sub.experience, sub.correct
            pop.numerosity, pop.birth = sub.numerosity, sub.birth


def _tournament(pop: Population, cs_idx: np.ndarray, frac: float, rng) -> int:
    tau = max(1, int(np.ceil(frac * len(cs_idx))))
    cands = rng.choice(cs_idx, size=min(tau, len(cs_idx)), replace=False)
    fit = pop.fitness[cands]
    return int(cands[int(np.argmax(fit))])


def _run_ga(pop: Population, cs_idx: np.ndarray, x, label: int, it: int,
            params: LcsParams, rng, report: TrainReport) -> None:
    report.ga_events += 1
    p1 = _tournament(pop, cs_idx, params.tournament_frac, rng)
    p2 = _tournament(pop, cs_idx, params.tournament_frac, rng)
    kids = [
        [pop.lo[p].copy(), pop.hi[p].copy(), pop.mask[p].copy()] for p in (p1, p2)
    ]
    if rng.random() < params.chi:
        n = pop.n_features
        c1, c2 = sorted(rng.integers(0, n + 1, size=2))
        for arrs in zip(*kids):
            arrs[0][c1:c2], arrs[1][c1:c2] = arrs[1][c1:c2].copy(), arrs[0][c1:c2].copy()
    for lo, hi, mask in kids:
        flip = rng.random(pop.n_features) < params.mu
        for k in np.flatnonzero(flip):
            if mask[k]:
                mask[k] = 0
                lo[k], hi[k] = 0.0, 1.0
            else:
                u = params.s0 * (1.0 - rng.random())
                mask[k] = 1
                lo[k] = min(max(x[k] - u, 0.0), 1.0)
                hi[k] = min(max(x[k] + u, 0.0), 1.0)
        if _subsumes(pop, p1, lo, hi, mask, params):
            pop.numerosity[p1] += 1
            report.subsumption_events += 1
        elif _subsumes(pop, p2, lo, hi, mask, params):
            pop.numerosity[p2] += 1
            report.subsumption_events += 1
        else:
            _insert(pop, lo, hi, mask, label, it)
    _delete_to_bound(pop, params, rng)


def train(X, y, params: LcsParams, labels=None) -> tuple[Population, TrainReport]:
    """Train a population on (X rows, y labels). `labels` pins the class
    vocabulary (needed when shards see different label subsets)."""
    params.validate()
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("training requires a non-empty 2-D dataset")
    if params.n_features_expected is not None and X.shape[1] != params.n_features_expected:
        raise ArityMismatch(
            f"dataset arity {X.shape[1]} != expected {params.n_features_expected}"
        )
    if len(y) != X.shape[0]:
        raise ArityMismatch("len(y) != number of instances")
    labels = tuple(labels) if labels is not None else tuple(sorted(set(y)))
    label_idx = {l: i for i, l in enumerate(labels)}
    try:
        y_idx = np.array([label_idx[v] for v in y], dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"label {exc} not in vocabulary {labels}") from exc

    rng = np.random.default_rng(params.seed)
    n = X.shape[0]
    pool = (
        rng.choice(n, size=params.train_size, replace=False)
        if params.train_size < n
        else np.arange(n)
    )

    pop = Population.empty(X.shape[1], labels, params.nu)
    report = TrainReport(seed=params.seed, iterations=params.iterations)
    window_hits = 0
    window_preds = 0

    for it in range(1, params.iterations + 1):
        j = int(pool[rng.integers(0, len(pool))])
        x = X[j]
        lbl = int(y_idx[j])

        if pop.n_macro:
            m = match_one(pop.lo, pop.hi, pop.mask, x)
            midx = np.flatnonzero(m)
        else:
            midx = np.empty(0, dtype=np.int64)

        if len(midx):
            predicted = _vote_label(pop, midx)
            window_preds += 1
            window_hits += predicted == labels[lbl]
            pop.experience[midx] += 1
            cidx = midx[pop.action[midx] == lbl]
            pop.correct[cidx] += 1
        else:
            cidx = np.empty(0, dtype=np.int64)

        if len(cidx) == 0:
            lo, hi, mask = cover(x, params, rng)
            _insert_cover = pop.find_identical(lo, hi, mask, lbl)
            if _insert_cover >= 0:
                pop.numerosity[_insert_cover] += 1
            else:
                pop.append_rule(lo, hi, mask, lbl, 1, 1, 1, it)
            cidx = np.array([pop.n_macro - 1] if _insert_cover < 0 else [_insert_cover])
            report.covering_events += 1
            _delete_to_bound(pop, params, rng)

        if it % params.theta_ga == 0 and len(cidx):
            # deletion may have removed the covered rule; re-derive the correct set
            if pop.n_macro:
                m = match_one(pop.lo, pop.hi, pop.mask, x)
                cs = np.flatnonzero(m & (pop.action == lbl))
                if len(cs):
                    _run_ga(pop, cs, x, lbl, it, params, rng, report)

        if params.check_invariants:
            assert pop.n_micro <= params.N, "micro size exceeded N"
            assert (pop.correct <= pop.experience).all(), "correct > experience"
            assert (pop.numerosity >= 1).all(), "numerosity < 1"

        if it % 500 == 0 or it == params.iterations:
            acc = window_hits / window_preds if window_preds else 1.0
            if not report.curve or report.curve[-1][0] != it:
                report.curve.append((it, acc))
            window_hits = window_preds = 0

    report.macro = pop.n_macro
    report.micro = pop.n_micro
    return pop, report
