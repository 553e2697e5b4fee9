"""Expert rule tables and their aggregation into a consensus system.

Each expert fills in one consequent per antecedent grid cell. Aggregation
takes the per-cell majority (ties resolved pessimistically, toward the worse
outcome) and widens the footprint of uncertainty of output sets in
proportion to how often experts disagreed about them.
"""

import csv
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

from .membership import IT2TrapMF
from .system import FuzzyRule, FuzzySystem


class GridMismatch(Exception):
    pass


@dataclass(frozen=True)
class ExpertRuleTable:
    expert_id: str
    rows: dict

    def __post_init__(self):
        if not self.rows:
            raise ValueError(f"expert table {self.expert_id!r} is empty")


def expert_table_from_rows(expert_id: str, rows: dict) -> ExpertRuleTable:
    return ExpertRuleTable(
        expert_id=expert_id,
        rows={tuple(key): consequent for key, consequent in rows.items()},
    )


def load_expert_tables(path, n_antecedents: int = 3) -> list[ExpertRuleTable]:
    """Read expert tables from CSV: antecedent label columns first, then one
    consequent column per expert."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if len(header) <= n_antecedents:
            raise ValueError(f"{path}: no expert columns in header {header}")
        expert_ids = header[n_antecedents:]
        tables: dict[str, dict] = {eid: {} for eid in expert_ids}
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}: ragged row {row}")
            key = tuple(row[:n_antecedents])
            for eid, consequent in zip(expert_ids, row[n_antecedents:]):
                tables[eid][key] = consequent
    return [expert_table_from_rows(eid, tables[eid]) for eid in expert_ids]


def aggregate_experts(tables, system: FuzzySystem, delta: float = 0.5,
                      min_h: float = 0.05) -> FuzzySystem:
    """Merge expert tables into one rulebase over the system's grid.

    Majority vote per cell; ties go to the pessimistic (lower-ranked output
    label) choice. Each output MF whose cells drew disagreement gets its
    lower height reduced by delta times the disagreement rate, floored at
    min_h so the set stays a valid IT2 set.
    """
    tables = list(tables)
    if not tables:
        raise ValueError("need at least one expert table")
    grid = set(tables[0].rows)
    for table in tables[1:]:
        if set(table.rows) != grid:
            raise GridMismatch(
                f"expert {table.expert_id!r} covers a different grid than "
                f"{tables[0].expert_id!r}"
            )
    expected = {tuple(rule.antecedent) for rule in system.rules}
    if grid != expected:
        raise GridMismatch(
            f"expert grid has {len(grid)} cells, system rulebase has "
            f"{len(expected)}"
        )
    rank = {label: i for i, label in enumerate(system.output.labels)}
    for table in tables:
        bad = [c for c in table.rows.values() if c not in rank]
        if bad:
            raise ValueError(
                f"expert {table.expert_id!r} uses unknown consequents {bad}"
            )

    merged: dict[tuple, str] = {}
    contested: dict[tuple, bool] = {}
    for cell in grid:
        votes = Counter(table.rows[cell] for table in tables)
        top = max(votes.values())
        # pessimistic tie break: the worse outcome wins
        winner = min(
            (label for label, n in votes.items() if n == top),
            key=lambda label: rank[label],
        )
        merged[cell] = winner
        contested[cell] = len(votes) > 1

    new_mfs = []
    for label, mf in zip(system.output.labels, system.output.mfs):
        cells = [cell for cell in grid if merged[cell] == label]
        if cells:
            rate = sum(contested[cell] for cell in cells) / len(cells)
        else:
            rate = 0.0
        if rate == 0.0:
            new_mfs.append(mf)
        else:
            new_mfs.append(
                IT2TrapMF(
                    upper=mf.upper,
                    lower=mf.lower,
                    h=max(min_h, mf.h - delta * rate),
                )
            )
    rules = tuple(
        FuzzyRule(tuple(rule.antecedent), merged[tuple(rule.antecedent)])
        for rule in system.rules
    )
    return FuzzySystem(
        inputs=system.inputs,
        output=replace(system.output, mfs=tuple(new_mfs)),
        rules=rules,
    )
