"""Rule compaction and sharded two-layer training.

compact_cra2: greedy maximum-marginal-coverage set cover over the evaluation
dataset, visiting rules in (accuracy desc, numerosity desc, generality desc)
order with a canonical byte-level tie-break, so the result depends only on
the rule multiset, never on input row order.

compact_pdrc: threshold filter with a never-empty-class guard.

train_two_layer: round-robin shards trained independently (seed = base + shard
index), merged canonically with numerosity summing, re-evaluated on the full
dataset, then compacted with CRA2. With one shard this reproduces plain
train + compact_cra2 bit-for-bit.
"""

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .._kernels import match_block
from ..prep import EmptyDataset
from .params import LcsParams
from .population import EmptyPopulation, Population
from .training import train


def _dataset_counts(pop: Population, X, y_idx):
    """Match matrix, per-rule experience and correct counts on a dataset."""
    M = match_block(pop.lo, pop.hi, pop.mask, np.ascontiguousarray(X, dtype=np.float64))
    C = M & (y_idx[:, None] == pop.action[None, :])
    return M, C, M.sum(axis=0).astype(np.int64), C.sum(axis=0).astype(np.int64)


def _label_indices(pop: Population, y) -> np.ndarray:
    idx = {l: i for i, l in enumerate(pop.labels)}
    return np.array([idx.get(v, -1) for v in y], dtype=np.int64)


def compact_cra2(pop: Population, X, y) -> Population:
    X = np.asarray(X, dtype=np.float64)
    if pop.n_macro == 0:
        raise EmptyPopulation("nothing to compact")
    if X.shape[0] == 0:
        raise EmptyDataset("CRA2 needs a non-empty evaluation dataset")
    y_idx = _label_indices(pop, y)
    _, C, exp_ds, cor_ds = _dataset_counts(pop, X, y_idx)
    with np.errstate(invalid="ignore"):
        acc = np.where(exp_ds > 0, cor_ds / exp_ds, 0.0)

    order = sorted(
        range(pop.n_macro),
        key=lambda i: (
            -acc[i], -pop.numerosity[i], -pop.generality[i], pop.rule_key(i),
        ),
    )
    # Quality-first sweep: each rule claims the instances it correctly covers
    # that no better rule already claimed. Every instance thus keeps its best
    # explainer, which is what bounds the accuracy cost; a plain max-coverage
    # greedy lets one mediocre wide rule shadow the accurate rules of a whole
    # region.
    uncovered = np.ones(X.shape[0], dtype=bool)
    picked: list[int] = []
    for k in order:
        if not uncovered.any():
            break
        claims = C[:, k] & uncovered
        if claims.any():
            picked.append(k)
            uncovered &= ~claims

    chosen = picked
    out = pop.select(chosen)
    out.experience = exp_ds[chosen]
    out.correct = cor_ds[chosen]
    return out


def compact_pdrc(pop: Population, min_experience: int = 0, min_accuracy: float = 0.0,
                 min_numerosity: int = 0) -> Population:
    if pop.n_macro == 0:
        raise EmptyPopulation("nothing to compact")
    acc = pop.accuracy
    keep = (
        (pop.experience >= min_experience)
        & (acc >= min_accuracy)
        & (pop.numerosity >= min_numerosity)
    )
    # never drop the last rule of a class: resurrect its best survivor
    for cls in np.unique(pop.action):
        members = np.flatnonzero(pop.action == cls)
        if not keep[members].any():
            best = min(
                members,
                key=lambda i: (-acc[i], -pop.numerosity[i], -pop.generality[i], pop.rule_key(i)),
            )
            keep[best] = True
    return pop.select(np.flatnonzero(keep))


def merge_populations(pops: list[Population]) -> Population:
    """Canonical merge: dedupe identical (condition, action) summing numerosity
    and counters, then sort by rule key. Input order never matters."""
    if not pops:
        raise EmptyPopulation("no populations to merge")
    labels, nu, nf = pops[0].labels, pops[0].nu, pops[0].n_features
    for p in pops[1:]:
        if p.labels != labels or p.nu != nu or p.n_features != nf:
            raise ValueError("populations disagree on labels, nu, or feature arity")
    groups: dict[tuple, list] = {}
    for p in pops:
        for i in range(p.n_macro):
            key = p.rule_key(i)
            g = groups.setdefault(key, [p.lo[i], p.hi[i], p.mask[i], int(p.action[i]), 0, 0, 0, None])
            g[4] += int(p.experience[i])
            g[5] += int(p.correct[i])
            g[6] += int(p.numerosity[i])
            g[7] = int(p.birth[i]) if g[7] is None else min(g[7], int(p.birth[i]))
    merged = Population.empty(nf, labels, nu)
    for key in sorted(groups):
        lo, hi, mask, action, exp, cor, num, birth = groups[key]
        merged.append_rule(lo, hi, mask, action, exp, cor, num, birth)
    return merged


def _train_shard(args):
    Xs, ys, params, labels = args
    pop, _ = train(Xs, ys, params, labels=labels)
    return pop


def train_two_layer(X, y, shard_count: int, params: LcsParams, labels=None,
                    shard_order=None, workers: int | None = None) -> Population:
    if shard_count < 1:
        raise ValueError("shard_count must be >= 1")
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        raise EmptyDataset("training requires a non-empty dataset")
    labels = tuple(labels) if labels is not None else tuple(sorted(set(y)))
    y = list(y)

    jobs = []
    for s in range(shard_count):
        Xs = X[s::shard_count]
        ys = y[s::shard_count]
        jobs.append((Xs, ys, params.with_seed(params.seed + s), labels))

    order = list(shard_order) if shard_order is not None else list(range(shard_count))
    if sorted(order) != list(range(shard_count)):
        raise ValueError("shard_order must be a permutation of the shard indices")

    shard_pops: dict[int, Population] = {}
    if workers and workers > 1 and shard_count > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for s, pop in zip(order, ex.map(_train_shard, [jobs[s] for s in order])):
                shard_pops[s] = pop
    else:
        for s in order:
            shard_pops[s] = _train_shard(jobs[s])

    merged = merge_populations([shard_pops[s] for s in order])
    y_idx = _label_indices(merged, y)
    _, _, exp_ds, cor_ds = _dataset_counts(merged, X, y_idx)
    merged.experience = exp_ds
    merged.correct = cor_ds
    return compact_cra2(merged, X, y)
