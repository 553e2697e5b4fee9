"""Run storage, inference overlays, and the playback streaming service."""

from .server import create_app
from .store import (
    OVERLAY_SUFFIX,
    BadRange,
    DataDirUnreadable,
    ReplayStore,
    RunIndexEntry,
    RunNotFound,
    content_run_id,
)

__all__ = [
    "BadRange",
    "DataDirUnreadable",
    "OVERLAY_SUFFIX",
    "ReplayStore",
    "RunIndexEntry",
    "RunNotFound",
    "content_run_id",
    "create_app",
]
