"""Rule population stored as parallel arrays.

A rule = interval condition over normalized features + class action + integer
counters. DontCare attributes are stored canonically as mask 0 with the full
[0,1] interval, so identical conditions are bitwise identical and can be
deduplicated and sorted by raw bytes.
"""

import json
from pathlib import Path

import numpy as np

from ..formats import FORMAT_VERSION, SchemaError, check_format_version


class ArityMismatch(Exception):
    pass


class EmptyPopulation(Exception):
    pass


class Population:
    def __init__(self, lo, hi, mask, action, experience, correct, numerosity, birth,
                 labels: tuple[str, ...], nu: float):
        self.lo = np.ascontiguousarray(lo, dtype=np.float64)
        self.hi = np.ascontiguousarray(hi, dtype=np.float64)
        self.mask = np.ascontiguousarray(mask, dtype=np.uint8)
        self.action = np.asarray(action, dtype=np.int64)
        self.experience = np.asarray(experience, dtype=np.int64)
        self.correct = np.asarray(correct, dtype=np.int64)
        self.numerosity = np.asarray(numerosity, dtype=np.int64)
        self.birth = np.asarray(birth, dtype=np.int64)
        self.labels = tuple(labels)
        self.nu = float(nu)

    @classmethod
    def empty(cls, n_features: int, labels, nu: float) -> "Population":
        z = lambda dt: np.empty(0, dtype=dt)  # noqa: E731
        return cls(
            np.empty((0, n_features)), np.empty((0, n_features)),
            np.empty((0, n_features), dtype=np.uint8),
            z(np.int64), z(np.int64), z(np.int64), z(np.int64), z(np.int64),
            labels=tuple(labels), nu=nu,
        )

    # -- views ---------------------------------------------------------

    @property
    def n_features(self) -> int:
        return self.lo.shape[1]

    @property
    def n_macro(self) -> int:
        return len(self.action)

    @property
    def n_micro(self) -> int:
        return int(self.numerosity.sum())

    @property
    def accuracy(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.where(self.experience > 0, self.correct / self.experience, 0.0)

    @property
    def fitness(self) -> np.ndarray:
        return self.accuracy**self.nu

    @property
    def generality(self) -> np.ndarray:
        if self.n_features == 0:
            return np.ones(self.n_macro)
        return (self.mask == 0).mean(axis=1)

    def condition_tuple(self, i: int):
        return tuple(
            None if self.mask[i, k] == 0 else (float(self.lo[i, k]), float(self.hi[i, k]))
            for k in range(self.n_features)
        )

    def rule_key(self, i: int):
        """Total order over rules: condition bytes then action index."""
        return (self.mask[i].tobytes(), self.lo[i].tobytes(), self.hi[i].tobytes(),
                int(self.action[i]))

    # -- editing -------------------------------------------------------

    def append_rule(self, lo, hi, mask, action: int, experience: int, correct: int,
                    numerosity: int, birth: int) -> None:
        lo = np.asarray(lo, dtype=np.float64).copy()
        hi = np.asarray(hi, dtype=np.float64).copy()
        mask = np.asarray(mask, dtype=np.uint8).copy()
        lo[mask == 0] = 0.0
        hi[mask == 0] = 1.0
        self.lo = np.ascontiguousarray(np.vstack([self.lo, lo[None]]))
        self.hi = np.ascontiguousarray(np.vstack([self.hi, hi[None]]))
        self.mask = np.ascontiguousarray(np.vstack([self.mask, mask[None]]))
        self.action = np.append(self.action, np.int64(action))
        self.experience = np.append(self.experience, np.int64(experience))
        self.correct = np.append(self.correct, np.int64(correct))
        self.numerosity = np.append(self.numerosity, np.int64(numerosity))
        self.birth = np.append(self.birth, np.int64(birth))

    def select(self, idx) -> "Population":
        idx = np.asarray(idx)
        return Population(
            self.lo[idx], self.hi[idx], self.mask[idx], self.action[idx],
            self.experience[idx], self.correct[idx], self.numerosity[idx],
            self.birth[idx], self.labels, self.nu,
        )

    def copy(self) -> "Population":
        return self.select(np.arange(self.n_macro))

    def find_identical(self, lo, hi, mask, action: int) -> int:
        """Index of an existing rule with this exact (condition, action), else -1."""
        if self.n_macro == 0:
            return -1
        same = (
            (self.action == action)
            & (self.mask == mask).all(axis=1)
            & (self.lo == lo).all(axis=1)
            & (self.hi == hi).all(axis=1)
        )
        hits = np.flatnonzero(same)
        return int(hits[0]) if len(hits) else -1

    def equals(self, other: "Population") -> bool:
        return (
            self.labels == other.labels
            and self.nu == other.nu
            and self.lo.shape == other.lo.shape
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
            and np.array_equal(self.mask, other.mask)
            and np.array_equal(self.action, other.action)
            and np.array_equal(self.experience, other.experience)
            and np.array_equal(self.correct, other.correct)
            and np.array_equal(self.numerosity, other.numerosity)
            and np.array_equal(self.birth, other.birth)
        )


def save_population(pop: Population, path) -> None:
    meta = {
        "type": "lcs_population",
        "format_version": FORMAT_VERSION,
        "n_features": pop.n_features,
        "labels": list(pop.labels),
        "nu": pop.nu,
    }
    lines = [json.dumps(meta, separators=(",", ":"))]
    for i in range(pop.n_macro):
        cond = [
            None if pop.mask[i, k] == 0 else [float(pop.lo[i, k]), float(pop.hi[i, k])]
            for k in range(pop.n_features)
        ]
        lines.append(
            json.dumps(
                {
                    "condition": cond,
                    "action": pop.labels[pop.action[i]],
                    "experience": int(pop.experience[i]),
                    "correct": int(pop.correct[i]),
                    "numerosity": int(pop.numerosity[i]),
                    "birth": int(pop.birth[i]),
                },
                separators=(",", ":"),
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_population(path) -> Population:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise SchemaError("empty population file")
    meta = json.loads(lines[0])
    if meta.get("type") != "lcs_population":
        raise SchemaError("first record must have type 'lcs_population'")
    check_format_version(meta.get("format_version"), "population file")
    labels = tuple(meta["labels"])
    n_features = int(meta["n_features"])
    pop = Population.empty(n_features, labels, float(meta["nu"]))
    label_idx = {l: i for i, l in enumerate(labels)}
    for raw in lines[1:]:
        if not raw.strip():
            continue
        rec = json.loads(raw)
        lo = np.zeros(n_features)
        hi = np.ones(n_features)
        mask = np.zeros(n_features, dtype=np.uint8)
        for k, c in enumerate(rec["condition"]):
            if c is not None:
                lo[k], hi[k] = float(c[0]), float(c[1])
                mask[k] = 1
        pop.append_rule(
            lo, hi, mask, label_idx[rec["action"]], rec["experience"], rec["correct"],
            rec["numerosity"], rec.get("birth", 0),
        )
    return pop
