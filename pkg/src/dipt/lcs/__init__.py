"""Supervised learning classifier system: interval rules over normalized
features, trained online with covering, a periodic GA, and subsumption;
compacted for analysis; applied to frame streams to infer state timelines."""

from .compact import compact_cra2, compact_pdrc, merge_populations, train_two_layer
from .params import PRESETS, LcsParams
from .population import (
    ArityMismatch,
    EmptyPopulation,
    Population,
    load_population,
    save_population,
)
from .predict import PredictionExplanation, RuleView, predict, predict_many
from .searchend import SearchEndClassifier, search_end_features
from .timeline import (
    InferredTimeline,
    InferredTransition,
    TimelineEntry,
    infer_state_timeline,
    resolve_trigger,
)
from .training import TrainReport, cover, matches, train

__all__ = [
    "ArityMismatch",
    "EmptyPopulation",
    "InferredTimeline",
    "InferredTransition",
    "LcsParams",
    "PRESETS",
    "Population",
    "PredictionExplanation",
    "RuleView",
    "SearchEndClassifier",
    "TimelineEntry",
    "TrainReport",
    "compact_cra2",
    "compact_pdrc",
    "cover",
    "infer_state_timeline",
    "load_population",
    "matches",
    "merge_populations",
    "predict",
    "predict_many",
    "resolve_trigger",
    "save_population",
    "search_end_features",
    "train",
    "train_two_layer",
]
