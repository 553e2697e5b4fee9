"""Interval type-2 fuzzy logic engine estimating perception quality."""

from .experts import (
    ExpertRuleTable,
    GridMismatch,
    aggregate_experts,
    expert_table_from_rows,
    load_expert_tables,
)
from .inference import (
    NoFiring,
    PerceptionEstimate,
    classify_score,
    fire_rule,
    infer,
    km_type_reduce,
)
from .membership import (
    DomainViolation,
    IT2TrapMF,
    fuzzify,
    mf_centroid,
    trap_centroid,
    trap_value,
)
from .system import (
    FuzzyRule,
    FuzzySystem,
    LinguisticVariable,
    build_default_system,
    load_system,
    save_system,
)

__all__ = [
    "DomainViolation",
    "ExpertRuleTable",
    "FuzzyRule",
    "FuzzySystem",
    "GridMismatch",
    "IT2TrapMF",
    "LinguisticVariable",
    "NoFiring",
    "PerceptionEstimate",
    "aggregate_experts",
    "build_default_system",
    "classify_score",
    "expert_table_from_rows",
    "fire_rule",
    "fuzzify",
    "infer",
    "km_type_reduce",
    "load_expert_tables",
    "load_system",
    "mf_centroid",
    "save_system",
    "trap_centroid",
    "trap_value",
]
