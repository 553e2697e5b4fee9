"""Trained model artifact.

A model file is a valid LCS population file (JSON Lines) whose meta line
additionally carries the feature normalization fitted on the training
corpus and, when trained, the search-end trigger classifier. Population
readers ignore the extra keys; this loader surfaces them, so one file moves
the whole inference configuration around.
"""

import json
from dataclasses import dataclass
from pathlib import Path

from .formats import SchemaError
from .lcs import Population, SearchEndClassifier, load_population, save_population
from .prep import NormalizationStats


@dataclass(frozen=True)
class ModelArtifacts:
    population: Population
    stats: NormalizationStats
    search_end: SearchEndClassifier | None = None


def save_model(
    path,
    population: Population,
    stats: NormalizationStats,
    search_end: SearchEndClassifier | None = None,
) -> None:
    save_population(population, path)
    p = Path(path)
    lines = p.read_text(encoding="utf-8").splitlines()
    meta = json.loads(lines[0])
    meta["normalization"] = stats.to_dict()
    if search_end is not None:
        meta["search_end"] = search_end.to_dict()
    lines[0] = json.dumps(meta, separators=(",", ":"))
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> ModelArtifacts:
    population = load_population(path)
    meta = json.loads(Path(path).read_text(encoding="utf-8").splitlines()[0])
    if "normalization" not in meta:
        raise SchemaError(f"{path}: population file has no normalization; "
                          "not a model artifact")
    stats = NormalizationStats.from_dict(meta["normalization"])
    search_end = (
        SearchEndClassifier.from_dict(meta["search_end"])
        if "search_end" in meta
        else None
    )
    return ModelArtifacts(population=population, stats=stats, search_end=search_end)
