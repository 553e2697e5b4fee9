"""Run index and cached inference overlays.

Every readable log in the data directory becomes an index entry keyed by the
content hash of the file, so identity survives restarts and renames. The
per-frame enrichment (truth state, inferred state when a model is loaded,
trigger statuses, FLS score, geolocation comparison) is computed once per
run and cached beside the log; replay then streams plain dictionaries.
"""

import hashlib
import json
import logging
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path

from ..compare import geoloc_error, trigger_status, truth_timeline
from ..fls import build_default_system, infer, load_system
from ..formats import FORMAT_VERSION, SchemaError, check_format_version
from ..lcs import infer_state_timeline
from ..model import load_model
from ..prep import ParseError, merge_streams, read_log
from ..sim import BehaviorState, Trigger, footprint_radius

log = logging.getLogger("dipt.replay")

OVERLAY_SUFFIX = ".overlay.json"


class DataDirUnreadable(Exception):
    pass


class RunNotFound(Exception):
    pass


class BadRange(Exception):
    pass


def content_run_id(path) -> str:
    """Run id: content hash of the log file, stable across restarts."""
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return digest[:16]


@dataclass(frozen=True)
class RunIndexEntry:
    run_id: str
    path: Path
    created: float
    outcome: str
    duration: float
    n_frames: int
    tick_hz: float
    area: tuple[float, float]
    target: tuple[float, float]
    target_present: bool
    visibility: float
    light_level: float
    uav_count: int

    def to_doc(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "run_id": self.run_id,
            "file": self.path.name,
            "created": self.created,
            "outcome": self.outcome,
            "duration": self.duration,
            "n_frames": self.n_frames,
            "tick_hz": self.tick_hz,
            "area": list(self.area),
            "target": list(self.target),
            "target_present": self.target_present,
            "visibility": self.visibility,
            "light_level": self.light_level,
            "uav_count": self.uav_count,
        }


def _apparent_size(target_size: float, altitude: float, fov_deg: float) -> float:
    radius = footprint_radius(altitude, fov_deg)
    if radius <= 0.0:
        return 1.0
    return min(1.0, target_size / radius)


class ReplayStore:
    """Read-only view over a directory of run logs plus optional models.

    `model_path` points at a trained model artifact; without it the overlay
    carries truth states only and inferred fields stay null. The FLS system
    defaults to the built-in detection-performance rulebase.
    """

    def __init__(self, data_dir, model_path=None, fls_path=None, window: int = 3):
        self.data_dir = Path(data_dir)
        if not self.data_dir.is_dir():
            raise DataDirUnreadable(f"{data_dir} is not a readable directory")
        self.window = window
        self.model = load_model(model_path) if model_path else None
        self.fls = load_system(fls_path) if fls_path else build_default_system()
        self._entries: dict[str, RunIndexEntry] = {}
        self._overlays: dict[str, dict] = {}
        self.rescan()

    # -- indexing ---------------------------------------------------------

    def rescan(self) -> None:
        entries = {}
        for path in sorted(self.data_dir.glob("*.jsonl")):
            try:
                entry = self._index_one(path)
            except (SchemaError, ParseError, ValueError, KeyError) as exc:
                log.warning("skipping unreadable log %s: %s", path.name, exc)
                continue
            entries[entry.run_id] = entry
        self._entries = entries

    def _index_one(self, path: Path) -> RunIndexEntry:
        run_log = read_log(path)
        cfg = run_log.config
        frames = merge_streams(run_log, cfg.telemetry_rate_hz)
        return RunIndexEntry(
            run_id=content_run_id(path),
            path=path,
            created=path.stat().st_mtime,
            outcome=run_log.outcome.value,
            duration=frames[-1].time - frames[0].time,
            n_frames=len(frames),
            tick_hz=cfg.telemetry_rate_hz,
            area=(cfg.area.width, cfg.area.height),
            target=(cfg.target_x, cfg.target_y),
            target_present=cfg.area.contains(cfg.target_x, cfg.target_y),
            visibility=cfg.visibility,
            light_level=cfg.light_level,
            uav_count=len(cfg.uavs),
        )

    def entries(self) -> list[RunIndexEntry]:
        return sorted(self._entries.values(), key=lambda e: (e.created, e.run_id))

    def entry(self, run_id: str) -> RunIndexEntry:
        try:
            return self._entries[run_id]
        except KeyError:
            raise RunNotFound(run_id) from None

    # -- overlays ---------------------------------------------------------

    def overlay(self, run_id: str) -> dict:
        if run_id in self._overlays:
            return self._overlays[run_id]
        entry = self.entry(run_id)
        cache_path = entry.path.with_name(entry.path.name + OVERLAY_SUFFIX)
        doc = self._load_cached(cache_path, run_id)
        if doc is None:
            doc = self._build_overlay(entry)
            try:
                cache_path.write_text(
                    json.dumps(doc, separators=(",", ":")) + "\n", encoding="utf-8"
                )
            except OSError as exc:
                log.warning("cannot cache overlay for %s: %s", run_id, exc)
        self._overlays[run_id] = doc
        return doc

    def _load_cached(self, cache_path: Path, run_id: str):
        if not cache_path.is_file():
            return None
        try:
            doc = json.loads(cache_path.read_text(encoding="utf-8"))
            check_format_version(doc.get("format_version"), str(cache_path))
        except (json.JSONDecodeError, SchemaError, OSError) as exc:
            log.warning("rebuilding stale overlay %s: %s", cache_path.name, exc)
            return None
        if doc.get("run_id") != run_id:
            log.warning("overlay %s belongs to another log; rebuilding", cache_path.name)
            return None
        has_inference = self.model is not None
        if doc.get("has_inference") != has_inference:
            return None
        return doc

    def _build_overlay(self, entry: RunIndexEntry) -> dict:
        run_log = read_log(entry.path)
        cfg = run_log.config
        frames = merge_streams(run_log, cfg.telemetry_rate_hz)
        truth = truth_timeline(run_log, frames, window=1)

        inferred = None
        if self.model is not None:
            inferred = infer_state_timeline(
                self.model.population,
                frames,
                stats=self.model.stats,
                search_end=self.model.search_end,
                window=self.window,
            )

        def label_maps(timeline):
            by_tick = {
                u: {e.time: e.label for e in entries}
                for u, entries in timeline.states.items()
            }
            fired = {
                (tr.uav_id, tr.time): tr.trigger
                for tr in timeline.transitions
                if tr.trigger is not None
            }
            return by_tick, fired

        truth_states, truth_fired = label_maps(truth)
        inf_states, inf_fired = label_maps(inferred) if inferred else ({}, {})

        out_frames = []
        for frame in frames:
            uavs = {}
            for u, rec in sorted(frame.uavs.items()):
                t_state = truth_states.get(u, {}).get(frame.time)
                i_state = inf_states.get(u, {}).get(frame.time)
                shown = i_state if i_state is not None else t_state
                fired_map = inf_fired if inferred else truth_fired
                fired = fired_map.get((u, frame.time))
                statuses = trigger_status(
                    BehaviorState(shown),
                    fired=Trigger(fired) if fired is not None else None,
                )
                est = infer(
                    self.fls,
                    {
                        "visibility": frame.visibility,
                        "light_level": frame.light_level,
                        "apparent_size": _apparent_size(
                            cfg.target_size, rec.altitude, frame.fov_deg
                        ),
                    },
                )
                # same ordering as the perception report digests
                ranked = sorted(est.trace.items(), key=lambda kv: (-kv[1][1], kv[0]))
                uavs[str(u)] = {
                    "time": rec.time,
                    "x": rec.x,
                    "y": rec.y,
                    "altitude": rec.altitude,
                    "heading": rec.heading,
                    "heading_rate": rec.heading_rate,
                    "airspeed": rec.airspeed,
                    "battery": rec.battery,
                    "truth_state": t_state,
                    "inferred_state": i_state,
                    "fls_score": est.score,
                    "fls_label": est.label,
                    "no_firing": est.no_firing,
                    "fls_rules": [
                        {"antecedent": list(a), "f_lo": f[0], "f_up": f[1]}
                        for a, f in ranked[:3]
                    ],
                    "triggers": {t.value: s.value for t, s in statuses.items()},
                }
            doc = {
                "time": frame.time,
                "visibility": frame.visibility,
                "light_level": frame.light_level,
                "detected": frame.detected,
                "perceived": list(frame.perceived) if frame.perceived else None,
                "target": [cfg.target_x, cfg.target_y],
                "geoloc_error": (
                    geoloc_error(frame.perceived, (cfg.target_x, cfg.target_y))
                    if frame.perceived
                    else None
                ),
                "uavs": uavs,
            }
            out_frames.append(doc)
        return {
            "format_version": FORMAT_VERSION,
            "kind": "overlay",
            "run_id": entry.run_id,
            "tick_hz": entry.tick_hz,
            "has_inference": self.model is not None,
            "frames": out_frames,
        }

    # -- frame access -------------------------------------------------------

    def frames(self, run_id: str, t_from: float | None = None, t_to: float | None = None) -> list[dict]:
        """Enriched frames with time in [t_from, t_to]; reads are pure."""
        if t_from is not None and t_to is not None and t_from > t_to:
            raise BadRange(f"from {t_from} > to {t_to}")
        all_frames = self.overlay(run_id)["frames"]
        lo = 0 if t_from is None else bisect_left([f["time"] for f in all_frames], t_from - 1e-9)
        out = []
        for f in all_frames[lo:]:
            if t_to is not None and f["time"] > t_to + 1e-9:
                break
            out.append(f)
        return out
