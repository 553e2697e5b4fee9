"""JSON Lines run-log serialization.

Layout: one config record first (carrying the run outcome), then telemetry
and event records interleaved in time order. Field names are part of the
on-disk contract; see README for the full table. Serialization is canonical,
so identical logs produce identical bytes and a content digest identifies a
run.
"""

import hashlib
import json
from pathlib import Path

from ..formats import FORMAT_VERSION, SchemaError, check_format_version
from ..sim import (
    BehaviorState,
    ConfidenceClass,
    Detection,
    EventKind,
    Outcome,
    RunLog,
    ScenarioConfig,
    TelemetryRecord,
    Trigger,
    TruthEvent,
)


class ParseError(Exception):
    """A line that is not valid JSON; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


_TELEMETRY_FIELDS = (
    "time", "uav_id", "x", "y", "altitude", "heading", "heading_rate", "airspeed", "battery",
)


def _telemetry_record(r: TelemetryRecord) -> dict:
    d = {"type": "telemetry"}
    d.update({f: getattr(r, f) for f in _TELEMETRY_FIELDS})
    return d


def _event_record(e: TruthEvent) -> dict:
    d = {"type": "event", "time": e.time, "uav_id": e.uav_id, "kind": e.kind.value}
    if e.kind is EventKind.STATE_CHANGE:
        d["state"] = e.state.value
        d["trigger"] = e.trigger.value
    elif e.kind is EventKind.DETECTION:
        det = e.detection
        d["detection"] = {
            "time": det.time,
            "uav_id": det.uav_id,
            "confidence": det.confidence,
            "confidence_class": det.confidence_class.value,
            "perceived_x": det.perceived_x,
            "perceived_y": det.perceived_y,
        }
    elif e.kind is EventKind.AUCTION:
        d["winner"] = e.winner
        d["bids"] = [[u, c] for u, c in e.bids]
    elif e.kind is EventKind.PASS_COMPLETED:
        d["pass_index"] = e.pass_index
    return d


def serialize_log(log: RunLog) -> str:
    head = {
        "type": "config",
        "format_version": FORMAT_VERSION,
        "outcome": log.outcome.value,
        "config": log.config.to_dict(),
    }
    records = [(r.time, 0, r.uav_id, _telemetry_record(r)) for r in log.telemetry]
    records += [(e.time, 1, e.uav_id, _event_record(e)) for e in log.events]
    records.sort(key=lambda item: item[:3])
    lines = [json.dumps(head, separators=(",", ":"))]
    lines += [json.dumps(rec, separators=(",", ":")) for _, _, _, rec in records]
    return "\n".join(lines) + "\n"


def write_log(log: RunLog, path) -> None:
    Path(path).write_text(serialize_log(log), encoding="utf-8")


def log_digest(log: RunLog) -> str:
    """Content hash of the canonical serialization (also the replay run id)."""
    return hashlib.sha256(serialize_log(log).encode("utf-8")).hexdigest()


def _need(rec: dict, field: str, line: int):
    if field not in rec:
        raise SchemaError(f"missing field '{field}' at line {line}")
    return rec[field]


def _parse_telemetry(rec: dict, line: int) -> TelemetryRecord:
    vals = {f: _need(rec, f, line) for f in _TELEMETRY_FIELDS}
    vals["uav_id"] = int(vals["uav_id"])
    return TelemetryRecord(**{k: (float(v) if k != "uav_id" else v) for k, v in vals.items()})


def _parse_event(rec: dict, line: int) -> TruthEvent:
    try:
        kind = EventKind(_need(rec, "kind", line))
    except ValueError as exc:
        raise SchemaError(f"unknown event kind at line {line}: {exc}") from exc
    time = float(_need(rec, "time", line))
    uav_id = int(_need(rec, "uav_id", line))
    try:
        if kind is EventKind.STATE_CHANGE:
            return TruthEvent(
                time=time, uav_id=uav_id, kind=kind,
                state=BehaviorState(_need(rec, "state", line)),
                trigger=Trigger(_need(rec, "trigger", line)),
            )
        if kind is EventKind.DETECTION:
            d = _need(rec, "detection", line)
            det = Detection(
                time=float(_need(d, "time", line)),
                uav_id=int(_need(d, "uav_id", line)),
                confidence=float(_need(d, "confidence", line)),
                confidence_class=ConfidenceClass(_need(d, "confidence_class", line)),
                perceived_x=float(_need(d, "perceived_x", line)),
                perceived_y=float(_need(d, "perceived_y", line)),
            )
            return TruthEvent(time=time, uav_id=uav_id, kind=kind, detection=det)
        if kind is EventKind.AUCTION:
            bids = tuple((int(u), float(c)) for u, c in _need(rec, "bids", line))
            return TruthEvent(
                time=time, uav_id=uav_id, kind=kind,
                winner=int(_need(rec, "winner", line)), bids=bids,
            )
        return TruthEvent(
            time=time, uav_id=uav_id, kind=kind,
            pass_index=int(_need(rec, "pass_index", line)),
        )
    except ValueError as exc:
        raise SchemaError(f"bad enum value at line {line}: {exc}") from exc


def read_log(path) -> RunLog:
    text = Path(path).read_text(encoding="utf-8")
    config = None
    outcome = None
    telemetry: list[TelemetryRecord] = []
    events: list[TruthEvent] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, exc.msg) from exc
        if not isinstance(rec, dict):
            raise ParseError(lineno, "record is not a JSON object")
        kind = _need(rec, "type", lineno)
        if config is None:
            if kind != "config":
                raise SchemaError("first record must have type 'config'")
            check_format_version(_need(rec, "format_version", lineno), "run log")
            try:
                config = ScenarioConfig.from_dict(_need(rec, "config", lineno))
                outcome = Outcome(_need(rec, "outcome", lineno))
            except (KeyError, TypeError) as exc:
                raise SchemaError(f"bad config record at line {lineno}: {exc}") from exc
            continue
        if kind == "telemetry":
            telemetry.append(_parse_telemetry(rec, lineno))
        elif kind == "event":
            events.append(_parse_event(rec, lineno))
        elif kind == "config":
            raise SchemaError(f"duplicate config record at line {lineno}")
        else:
            raise SchemaError(f"unknown record type '{kind}' at line {lineno}")
    if config is None:
        raise SchemaError("empty file: no config record")
    return RunLog(
        config=config, telemetry=tuple(telemetry), events=tuple(events), outcome=outcome,
    )
