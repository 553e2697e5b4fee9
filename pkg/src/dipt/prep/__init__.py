"""Telemetry preprocessing: log IO, stream merging, features, labels."""

from .features import (
    FEATURE_NAMES,
    EmptyDataset,
    NormalizationStats,
    WindowTooShort,
    apply_normalization,
    derive_features,
    fit_normalization,
)
from .frames import AlignedFrame, EmptyLog, FrameSeries, merge_streams
from .labels import LabeledInstance, MismatchedLog, label_frames
from .logio import ParseError, log_digest, read_log, serialize_log, write_log

__all__ = [
    "AlignedFrame",
    "EmptyDataset",
    "EmptyLog",
    "FEATURE_NAMES",
    "FrameSeries",
    "LabeledInstance",
    "MismatchedLog",
    "NormalizationStats",
    "ParseError",
    "WindowTooShort",
    "apply_normalization",
    "derive_features",
    "fit_normalization",
    "label_frames",
    "log_digest",
    "merge_streams",
    "read_log",
    "serialize_log",
    "write_log",
]
