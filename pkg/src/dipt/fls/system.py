"""Fuzzy system structure, the default detection-performance system, and
JSON persistence."""

import json
from dataclasses import dataclass, replace
from pathlib import Path

from ..formats import FORMAT_VERSION, check_format_version
from .membership import IT2TrapMF, trap_value


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    domain: tuple[float, float]
    labels: tuple[str, ...]
    mfs: tuple[IT2TrapMF, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.mfs):
            raise ValueError("one membership function per label")
        if not self.domain[0] < self.domain[1]:
            raise ValueError(f"empty domain for {self.name}")
        lo, hi = self.domain
        for k in range(101):
            x = lo + (hi - lo) * k / 100.0
            if max(trap_value(x, mf.upper) for mf in self.mfs) <= 0.0:
                raise ValueError(
                    f"{self.name}: membership functions leave {x} uncovered"
                )


@dataclass(frozen=True)
class FuzzyRule:
    antecedent: tuple[str, ...]
    consequent: str


@dataclass(frozen=True)
class FuzzySystem:
    inputs: list[LinguisticVariable]
    output: LinguisticVariable
    rules: tuple[FuzzyRule, ...]

    def __post_init__(self):
        for rule in self.rules:
            if len(rule.antecedent) != len(self.inputs):
                raise ValueError(f"rule arity mismatch: {rule}")
            for var, label in zip(self.inputs, rule.antecedent):
                if label not in var.labels:
                    raise ValueError(f"unknown label {label} for {var.name}")
            if rule.consequent not in self.output.labels:
                raise ValueError(f"unknown consequent {rule.consequent}")

    def replace_rules(self, rules) -> "FuzzySystem":
        return replace(
            self,
            rules=tuple(
                FuzzyRule(tuple(r.antecedent), r.consequent) for r in rules
            ),
        )

    def collapse_fou(self) -> "FuzzySystem":
        """Type-1 view of the system: every lower MF is lifted to its upper."""

        def collapse_var(var: LinguisticVariable) -> LinguisticVariable:
            return replace(
                var,
                mfs=tuple(
                    IT2TrapMF(upper=mf.upper, lower=mf.upper, h=1.0)
                    for mf in var.mfs
                ),
            )

        return FuzzySystem(
            inputs=[collapse_var(v) for v in self.inputs],
            output=collapse_var(self.output),
            rules=self.rules,
        )


def _shrunk(upper, inset: float, h: float = 0.9) -> IT2TrapMF:
    """Lower trapezoid with its feet pulled inward and height dropped to h.

    The plateau corners stay where the upper's are: the footprint of
    uncertainty lives on the slopes and in the uniform height gap. Keeping
    plateaus aligned preserves the overlap-at-1 partition structure for the
    lower bounds too, which the monotonicity of the inferred score rests on.
    """
    a, b, c, d = upper
    a2 = a if a == b else min(a + inset, b)
    d2 = d if c == d else max(d - inset, c)
    return IT2TrapMF(upper=upper, lower=(a2, b, c, d2), h=h)


_LEVEL = {"Low": 0, "Medium": 1, "High": 2}


def _detection_consequent(levels: tuple[str, str, str]) -> str:
    s = sum(_LEVEL[v] for v in levels)
    if s <= 1:
        return "Poor"
    if s <= 4:
        return "Marginal"
    return "Good"


def build_default_system() -> FuzzySystem:
    """Detection-performance system over visibility, light level, and target
    apparent size.

    Apparent size is the ratio of target extent to camera footprint radius,
    target_size / (altitude * tan(fov / 2)); at survey altitudes it lives in
    the low percent range, hence the compressed Low/Medium breakpoints.
    Consequents follow a monotone grid: the more High antecedents, the better
    the expected detection outcome.

    Each input partition overlaps at full membership: a label reaches 1
    before its neighbour leaves 1 (Medium's plateau starts where Low's ends,
    High's where Medium's ends). Together with the monotone rulebase this
    keeps the defuzzified score non-decreasing in every input; partitions
    that merely cross mid-slope let the aggregate firing of the favourable
    consequents dip at the crossover while an unfavourable one stays pinned,
    which shows up as local score reversals.
    """
    labels = ("Low", "Medium", "High")
    unit = (0.0, 1.0)
    ambient = (
        _shrunk((0.0, 0.0, 0.2, 0.45), 0.05),
        _shrunk((0.05, 0.2, 0.65, 0.85), 0.05),
        _shrunk((0.45, 0.65, 1.0, 1.0), 0.05),
    )
    size_mfs = (
        _shrunk((0.0, 0.0, 0.02, 0.045), 0.005),
        _shrunk((0.005, 0.02, 0.065, 0.09), 0.005),
        _shrunk((0.045, 0.065, 1.0, 1.0), 0.005),
    )
    out_mfs = (
        _shrunk((0.0, 0.0, 0.15, 0.4), 0.05),
        _shrunk((0.2, 0.4, 0.6, 0.8), 0.05),
        _shrunk((0.6, 0.85, 1.0, 1.0), 0.05),
    )
    inputs = [
        LinguisticVariable("visibility", unit, labels, ambient),
        LinguisticVariable("light_level", unit, labels, ambient),
        LinguisticVariable("apparent_size", unit, labels, size_mfs),
    ]
    output = LinguisticVariable(
        "detection_performance", unit, ("Poor", "Marginal", "Good"), out_mfs
    )
    rules = tuple(
        FuzzyRule((v, l, s), _detection_consequent((v, l, s)))
        for v in labels
        for l in labels
        for s in labels
    )
    return FuzzySystem(inputs=inputs, output=output, rules=rules)


def _mf_to_doc(mf: IT2TrapMF) -> dict:
    return {"upper": list(mf.upper), "lower": list(mf.lower), "h": mf.h}


def _mf_from_doc(doc: dict) -> IT2TrapMF:
    return IT2TrapMF(
        upper=tuple(doc["upper"]), lower=tuple(doc["lower"]), h=doc["h"]
    )


def _var_to_doc(var: LinguisticVariable) -> dict:
    return {
        "name": var.name,
        "domain": list(var.domain),
        "labels": list(var.labels),
        "mfs": [_mf_to_doc(mf) for mf in var.mfs],
    }


def _var_from_doc(doc: dict) -> LinguisticVariable:
    return LinguisticVariable(
        name=doc["name"],
        domain=tuple(doc["domain"]),
        labels=tuple(doc["labels"]),
        mfs=tuple(_mf_from_doc(m) for m in doc["mfs"]),
    )


def save_system(system: FuzzySystem, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "fls_system",
        "inputs": [_var_to_doc(v) for v in system.inputs],
        "output": _var_to_doc(system.output),
        "rules": [
            {"antecedent": list(r.antecedent), "consequent": r.consequent}
            for r in system.rules
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_system(path) -> FuzzySystem:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    check_format_version(doc.get("format_version"), what=str(path))
    return FuzzySystem(
        inputs=[_var_from_doc(v) for v in doc["inputs"]],
        output=_var_from_doc(doc["output"]),
        rules=tuple(
            FuzzyRule(tuple(r["antecedent"]), r["consequent"])
            for r in doc["rules"]
        ),
    )
