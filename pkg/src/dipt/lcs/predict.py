"""Vote-based prediction with an explanation trace.

Vote per class = sum over matching rules of fitness x numerosity x
(1 + specificity). The specificity factor realizes the default hierarchy: an
accurate specific exception rule outvotes a broader default rule wherever
both match.
"""

from dataclasses import dataclass

import numpy as np

from .._kernels import match_block, match_one
from .population import ArityMismatch, EmptyPopulation, Population


@dataclass(frozen=True)
class RuleView:
    condition: tuple
    action: str
    accuracy: float
    generality: float
    numerosity: int
    vote: float


@dataclass(frozen=True)
class PredictionExplanation:
    label: str
    votes: dict[str, float]
    rules: tuple[RuleView, ...]
    uncovered: bool
    override: bool


def _lexicographic_argmax(labels, votes: np.ndarray) -> str:
    best = votes.max()
    return min(labels[k] for k in np.flatnonzero(votes == best))


def _majority_label(pop: Population) -> str:
    mass = np.bincount(pop.action, weights=pop.numerosity.astype(float),
                       minlength=len(pop.labels))
    return _lexicographic_argmax(pop.labels, mass)


def predict(pop: Population, x) -> PredictionExplanation:
    if pop.n_macro == 0:
        raise EmptyPopulation("cannot predict from an empty population")
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (pop.n_features,):
        raise ArityMismatch(f"instance arity {x.shape} != {pop.n_features} features")

    matched = np.flatnonzero(match_one(pop.lo, pop.hi, pop.mask, x))
    if len(matched) == 0:
        return PredictionExplanation(
            label=_majority_label(pop), votes={}, rules=(), uncovered=True, override=False,
        )

    gen = pop.generality[matched]
    acc = pop.accuracy[matched]
    w = pop.fitness[matched] * pop.numerosity[matched] * (2.0 - gen)
    votes = np.bincount(pop.action[matched], weights=w, minlength=len(pop.labels))
    label = _lexicographic_argmax(pop.labels, votes)

    # default rule = the most general matching rule; override when it is outvoted
    default_rule = matched[int(np.argmax(gen))]
    override = pop.labels[pop.action[default_rule]] != label

    order = np.argsort(-w, kind="stable")
    rules = tuple(
        RuleView(
            condition=pop.condition_tuple(int(matched[k])),
            action=pop.labels[pop.action[matched[k]]],
            accuracy=float(acc[k]),
            generality=float(gen[k]),
            numerosity=int(pop.numerosity[matched[k]]),
            vote=float(w[k]),
        )
        for k in order
    )
    return PredictionExplanation(
        label=label,
        votes={pop.labels[k]: float(votes[k]) for k in range(len(pop.labels))},
        rules=rules,
        uncovered=False,
        override=override,
    )


def predict_many(pop: Population, X) -> list[str]:
    """Batch prediction (labels only); same vote rule as predict()."""
    if pop.n_macro == 0:
        raise EmptyPopulation("cannot predict from an empty population")
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != pop.n_features:
        raise ArityMismatch(f"dataset shape {X.shape} incompatible with {pop.n_features} features")
    M = match_block(pop.lo, pop.hi, pop.mask, X)
    w = pop.fitness * pop.numerosity * (2.0 - pop.generality)
    onehot = np.zeros((pop.n_macro, len(pop.labels)))
    onehot[np.arange(pop.n_macro), pop.action] = 1.0
    votes = M.astype(np.float64) @ (w[:, None] * onehot)

    label_order = np.argsort(pop.labels)  # lexicographic tie-break
    majority = _majority_label(pop)
    out = []
    covered = M.any(axis=1)
    for i in range(X.shape[0]):
        if not covered[i]:
            out.append(majority)
            continue
        row = votes[i]
        best = row.max()
        out.append(min(pop.labels[k] for k in np.flatnonzero(row == best)))
    return out
