"""Workbench command line: simulate, prepare, train, infer, evaluate, serve,
report.

Every subcommand that takes a seed is bit-reproducible from it, and every
file written carries a format_version. A KEY = VALUE config file (--config)
can stand in for any flag of the invoked subcommand; explicit flags win.

Exit codes: 0 success, 1 error, 2 accuracy below the evaluate --floor gate.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .compare import (
    EmptyInput,
    GridMismatch,
    PerceptionRun,
    compare_states,
    fls_report,
    truth_timeline,
)
from .fls import DomainViolation, build_default_system, infer, load_system
from .formats import FORMAT_VERSION, SchemaError, check_format_version
from .lcs import (
    LcsParams,
    SearchEndClassifier,
    infer_state_timeline,
    predict_many,
    search_end_features,
    train,
)
from .model import load_model, save_model
from .prep import (
    FEATURE_NAMES,
    EmptyLog,
    ParseError,
    apply_normalization,
    fit_normalization,
    label_frames,
    merge_streams,
    read_log,
    write_log,
)
from .replay import (
    BadRange,
    DataDirUnreadable,
    ReplayStore,
    RunNotFound,
    content_run_id,
    create_app,
)
from .sim import (
    BehaviorState,
    EventKind,
    Rect,
    ScenarioConfig,
    Trigger,
    UavSpec,
    footprint_radius,
    simulate,
)

_ERRORS = (
    SchemaError,
    ParseError,
    EmptyLog,
    EmptyInput,
    GridMismatch,
    DomainViolation,
    DataDirUnreadable,
    RunNotFound,
    BadRange,
    OSError,
    json.JSONDecodeError,
    ValueError,
)


# -- config file --------------------------------------------------------------


def read_config_file(path) -> dict:
    """KEY = VALUE lines, # comments; keys use the flag names (dashes ok)."""
    pairs = {}
    for ln, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected KEY = VALUE, got {raw!r}")
        key, value = line.split("=", 1)
        pairs[key.strip().replace("-", "_")] = value.strip()
    return pairs


def _apply_config(sub: argparse.ArgumentParser, pairs: dict) -> None:
    """Turn config pairs into subparser defaults so flags still win."""
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    unknown = sorted(set(pairs) - set(actions))
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    defaults = {}
    for key, raw in pairs.items():
        act = actions[key]
        if isinstance(act, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        elif act.nargs == 2:
            parts = raw.replace(",", " ").split()
            if len(parts) != 2:
                raise ValueError(f"config key {key} needs exactly 2 values")
            defaults[key] = [act.type(p) for p in parts]
        elif act.type is not None:
            defaults[key] = act.type(raw)
        else:
            defaults[key] = raw
    sub.set_defaults(**defaults)


# -- shared helpers ------------------------------------------------------------


def _frames_for(log, rate):
    return merge_streams(log, rate if rate is not None else log.config.telemetry_rate_hz)


def _manifest_logs(manifest_path):
    """Yield (run entry, path) for every run listed in a manifest file."""
    manifest_path = Path(manifest_path)
    doc = json.loads(manifest_path.read_text(encoding="utf-8"))
    check_format_version(doc.get("format_version"), what=str(manifest_path))
    if doc.get("kind") != "manifest":
        raise SchemaError(f"{manifest_path}: not a manifest file")
    for entry in doc["runs"]:
        yield entry, manifest_path.parent / entry["file"]


def _split_runs(n_runs: int, seed: int, train_frac: float):
    """Deterministic by-run split; returns (train indices, holdout indices)."""
    order = np.random.default_rng(seed).permutation(n_runs)
    n_train = max(1, int(round(train_frac * n_runs)))
    return sorted(order[:n_train].tolist()), sorted(order[n_train:].tolist())


def _mean_apparent_size(config) -> float:
    alts = [u.altitude for u in config.uavs]
    radius = footprint_radius(sum(alts) / len(alts), config.camera_fov_deg)
    return min(1.0, config.target_size / radius) if radius > 0 else 1.0


def _write_doc(doc: dict, out) -> None:
    text = json.dumps(doc, indent=2)
    if out is None:
        print(text)
    else:
        Path(out).write_text(text + "\n", encoding="utf-8")


# -- simulate -----------------------------------------------------------------


def _randomized_config(index: int, args) -> ScenarioConfig:
    """Scenario for batch slot `index`; one rng drives every randomized field."""
    seed = args.seed + index
    rng = np.random.default_rng(seed)
    width, height = args.area
    margin = args.target_margin
    if rng.random() < args.target_absent:
        # park the target far outside the search area so it is never seen
        tx, ty = width + 5000.0, height + 5000.0
    else:
        tx = rng.uniform(margin, width - margin)
        ty = rng.uniform(margin, height - margin)
    visibility = rng.uniform(*args.visibility)
    light = rng.uniform(*args.light)
    uavs = tuple(
        UavSpec(
            -80.0 - 40.0 * k,
            -80.0,
            rng.uniform(*args.altitude),
            rng.uniform(*args.airspeed),
        )
        for k in range(args.uavs)
    )
    return ScenarioConfig(
        seed=seed,
        area=Rect(0.0, 0.0, width, height),
        target_x=tx,
        target_y=ty,
        visibility=visibility,
        light_level=light,
        search_timeout_s=args.timeout,
        telemetry_rate_hz=args.rate,
        uavs=uavs,
    )


def _simulate_one(job):
    config, path_str = job
    log = simulate(config)
    path = Path(path_str)
    write_log(log, path)
    return {
        "run_id": content_run_id(path),
        "file": path.name,
        "seed": config.seed,
        "outcome": log.outcome.value,
    }


def _cmd_simulate(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        (_randomized_config(i, args), str(out_dir / f"run-{args.seed + i:06d}.jsonl"))
        for i in range(args.count)
    ]
    if args.jobs > 1 and jobs:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            runs = list(pool.map(_simulate_one, jobs))
    else:
        runs = [_simulate_one(j) for j in jobs]
    manifest = {
        "format_version": FORMAT_VERSION,
        "kind": "manifest",
        "seed": args.seed,
        "count": args.count,
        "params": {
            "area": list(args.area),
            "visibility": list(args.visibility),
            "light": list(args.light),
            "target_absent": args.target_absent,
            "target_margin": args.target_margin,
            "timeout": args.timeout,
            "uavs": args.uavs,
            "altitude": list(args.altitude),
            "airspeed": list(args.airspeed),
            "rate": args.rate,
        },
        "runs": runs,
    }
    _write_doc(manifest, out_dir / "manifest.json")
    print(f"wrote {len(runs)} runs and manifest.json to {out_dir}")
    return 0


# -- prepare ------------------------------------------------------------------


def _cmd_prepare(args) -> int:
    log = read_log(args.log)
    frames = _frames_for(log, args.rate)
    instances = label_frames(log, frames, task=args.task, window=args.window)
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "prepared",
        "file": Path(args.log).name,
        "run_id": content_run_id(args.log),
        "task": args.task,
        "window": args.window,
        "tick_hz": frames.tick_hz,
        "n_frames": len(frames),
        "feature_names": list(FEATURE_NAMES),
        "instances": [
            {
                "time": inst.time,
                "uav_id": inst.uav_id,
                "label": inst.label,
                "features": np.asarray(inst.features, dtype=float).tolist(),
            }
            for inst in instances
        ],
    }
    _write_doc(doc, args.out)
    return 0


# -- train --------------------------------------------------------------------


def _load_split_instances(args):
    """Read manifest runs, label them, and split instance lists by run."""
    entries = list(_manifest_logs(args.manifest))
    if not entries:
        raise EmptyInput("manifest lists no runs")
    per_run = []
    for entry, path in entries:
        log = read_log(path)
        frames = _frames_for(log, args.rate)
        per_run.append(label_frames(log, frames, task="state", window=args.window))
    train_idx, hold_idx = _split_runs(len(per_run), args.seed, args.train_frac)
    if not hold_idx:
        print("warning: holdout split is empty; reporting training accuracy only",
              file=sys.stderr)
    train_insts = [i for r in train_idx for i in per_run[r]]
    hold_insts = [i for r in hold_idx for i in per_run[r]]
    return entries, train_idx, hold_idx, train_insts, hold_insts


def _accuracy(pop, X, y) -> float:
    pred = predict_many(pop, X)
    return sum(p == t for p, t in zip(pred, y)) / len(y)


def _train_state(args):
    t0 = time.perf_counter()
    entries, train_idx, hold_idx, train_insts, hold_insts = _load_split_instances(args)
    stats = fit_normalization([i.features for i in train_insts])
    X_train = apply_normalization([i.features for i in train_insts], stats)
    y_train = [i.label for i in train_insts]
    params = LcsParams(N=args.pop_size, iterations=args.iters, nu=args.nu,
                       train_size=args.train_size, seed=args.seed)
    pop, report = train(X_train, y_train, params)
    save_model(args.out, pop, stats)

    counts = {}
    for label in y_train:
        counts[label] = counts.get(label, 0) + 1
    majority = max(counts.values()) / len(y_train)
    train_acc = _accuracy(pop, X_train, y_train)
    hold_acc = None
    if hold_insts:
        X_hold = apply_normalization([i.features for i in hold_insts], stats)
        hold_acc = _accuracy(pop, X_hold, [i.label for i in hold_insts])
    return {
        "n_runs": len(entries),
        "n_train_runs": len(train_idx),
        "n_holdout_runs": len(hold_idx),
        "n_train_instances": len(train_insts),
        "n_holdout_instances": len(hold_insts),
        "params": {"N": params.N, "iterations": params.iterations, "nu": params.nu,
                   "train_size": params.train_size, "seed": params.seed},
        "curve": [[i, a] for i, a in report.curve],
        "macro_rules": report.macro,
        "train_accuracy": train_acc,
        "holdout_accuracy": hold_acc,
        "majority_baseline": majority,
        "wall_time_s": time.perf_counter() - t0,
    }


def _search_end_samples(log):
    """(features, trigger) for each search phase that ended undetected."""
    wanted = (Trigger.SEARCH_TIMEOUT_REACHED, Trigger.SEARCH_COMPLETE)
    out = []
    for uav in range(len(log.config.uavs)):
        tel = [r for r in log.telemetry if r.uav_id == uav]
        entry_time = None
        for ev in log.events:
            if ev.uav_id != uav or ev.kind is not EventKind.STATE_CHANGE:
                continue
            if ev.state is BehaviorState.FLY_SEARCH_PATTERN:
                entry_time = ev.time
            elif entry_time is not None:
                if ev.trigger in wanted:
                    x = search_end_features(tel, log.config, uav,
                                            ev.time - entry_time, ev.time)
                    out.append((x, ev.trigger.value))
                entry_time = None
    return out


def _train_search_end(args):
    if args.model is None:
        raise ValueError("--task search-end extends an existing model; pass --model")
    t0 = time.perf_counter()
    base = load_model(args.model)
    entries = list(_manifest_logs(args.manifest))
    if not entries:
        raise EmptyInput("manifest lists no runs")
    per_run = [_search_end_samples(read_log(path)) for _, path in entries]
    train_idx, hold_idx = _split_runs(len(per_run), args.seed, args.train_frac)
    if not hold_idx:
        print("warning: holdout split is empty; reporting training accuracy only",
              file=sys.stderr)
    train_samples = [s for r in train_idx for s in per_run[r]]
    hold_samples = [s for r in hold_idx for s in per_run[r]]
    if not train_samples:
        raise EmptyInput("no search-end transitions in the training runs")
    X = np.array([x for x, _ in train_samples])
    y = [label for _, label in train_samples]
    clf = SearchEndClassifier.fit(X, y)
    save_model(args.out, base.population, base.stats, clf)

    def acc(samples):
        if not samples:
            return None
        hits = sum(clf.predict(x).value == label for x, label in samples)
        return hits / len(samples)

    return {
        "n_runs": len(entries),
        "n_train_runs": len(train_idx),
        "n_holdout_runs": len(hold_idx),
        "n_train_instances": len(train_samples),
        "n_holdout_instances": len(hold_samples),
        "params": {"seed": args.seed, "base_model": str(args.model)},
        "curve": [],
        "train_accuracy": acc(train_samples),
        "holdout_accuracy": acc(hold_samples),
        "majority_baseline": None,
        "wall_time_s": time.perf_counter() - t0,
    }


def _cmd_train(args) -> int:
    body = _train_state(args) if args.task == "state" else _train_search_end(args)
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "train_report",
        "task": args.task,
        "seed": args.seed,
        "model": str(args.out),
        **body,
    }
    report_path = args.report if args.report else f"{args.out}.report.json"
    _write_doc(doc, report_path)
    shown = doc["holdout_accuracy"]
    which = "holdout"
    if shown is None:
        shown, which = doc["train_accuracy"], "training"
    print(f"model written to {args.out}; final {which} accuracy {shown:.4f}")
    return 0


# -- infer --------------------------------------------------------------------


def _cmd_infer(args) -> int:
    model = load_model(args.model)
    log = read_log(args.log)
    frames = _frames_for(log, args.rate)
    timeline = infer_state_timeline(model.population, frames, stats=model.stats,
                                    search_end=model.search_end, window=args.window)
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "timeline",
        "file": Path(args.log).name,
        "run_id": content_run_id(args.log),
        "window": args.window,
        "uavs": {
            str(uid): {
                "times": [e.time for e in entries],
                "states": [e.label for e in entries],
            }
            for uid, entries in sorted(timeline.states.items())
        },
        "transitions": [
            {
                "time": tr.time,
                "uav_id": tr.uav_id,
                "source": tr.source,
                "target": tr.target,
                "trigger": tr.trigger,
                "illegal": tr.illegal,
            }
            for tr in timeline.transitions
        ],
    }
    _write_doc(doc, args.out)
    return 0


# -- evaluate -----------------------------------------------------------------


def _evaluate_run(entry, path, model, fls_system, args):
    log = read_log(path)
    frames = _frames_for(log, args.rate)
    truth = truth_timeline(log, frames, window=args.window)
    inferred = infer_state_timeline(model.population, frames, stats=model.stats,
                                    search_end=model.search_end, window=args.window)
    state_rep = compare_states(inferred, truth)
    inputs = {
        "visibility": log.config.visibility,
        "light_level": log.config.light_level,
        "apparent_size": _mean_apparent_size(log.config),
    }
    detected = any(ev.kind is EventKind.DETECTION for ev in log.events)
    run = PerceptionRun(run_id=entry["run_id"], estimate=infer(fls_system, inputs),
                        detected=detected, inputs=inputs)
    return state_rep, run


def _cmd_evaluate(args) -> int:
    model = load_model(args.model)
    fls_system = load_system(args.fls) if args.fls else build_default_system()
    entries = list(_manifest_logs(args.manifest))
    if not entries:
        raise EmptyInput("manifest lists no runs")

    run_docs, perception_runs, accuracies, trig_accs, illegal_total = [], [], [], [], 0
    for entry, path in entries:
        state_rep, run = _evaluate_run(entry, path, model, fls_system, args)
        perception_runs.append(run)
        accuracies.append(state_rep.accuracy)
        trig_accs.append(state_rep.trigger_accuracy)
        illegal_total += len(state_rep.illegal_jumps)
        run_docs.append({
            "run_id": entry["run_id"],
            "file": entry["file"],
            "state": state_rep.to_doc(),
            "perception": {
                "score": run.estimate.score,
                "label": run.estimate.label,
                "no_firing": run.estimate.no_firing,
                "detected": run.detected,
            },
        })
    perception = fls_report(perception_runs)
    aggregate_acc = sum(accuracies) / len(accuracies)
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "evaluation",
        "model": str(args.model),
        "n_runs": len(entries),
        "floor": args.floor,
        "aggregate": {
            "state_accuracy_mean": aggregate_acc,
            "trigger_accuracy_mean": sum(trig_accs) / len(trig_accs),
            "illegal_jumps_total": illegal_total,
            "perception": perception.to_doc(),
        },
        "runs": run_docs,
    }
    _write_doc(doc, args.out)
    # keep stdout clean for the JSON document when no --out is given
    print(f"state accuracy {aggregate_acc:.4f} over {len(entries)} runs "
          f"(floor {args.floor})", file=sys.stderr)
    if aggregate_acc < args.floor:
        print("error: accuracy below floor", file=sys.stderr)
        return 2
    return 0


# -- serve --------------------------------------------------------------------


def build_server(args):
    """Resolve serve settings (flags beat env) and build the ASGI app."""
    import os

    data_dir = args.data or os.environ.get("DIPT_DATA_DIR")
    if not data_dir:
        raise ValueError("no data directory; pass --data or set DIPT_DATA_DIR")
    listen = args.listen or os.environ.get("DIPT_LISTEN") or "127.0.0.1:8008"
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"bad listen address {listen!r}; expected HOST:PORT")
    store = ReplayStore(Path(data_dir), model_path=args.model, fls_path=args.fls,
                        window=args.window)
    return create_app(store), host, int(port_text)


def _cmd_serve(args) -> int:
    import uvicorn

    app, host, port = build_server(args)
    print(f"serving replay API on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


# -- report -------------------------------------------------------------------


def _render_evaluation(doc) -> str:
    lines = [f"evaluation of {doc['model']} over {doc['n_runs']} runs", ""]
    lines.append(f"{'run':16}  {'state':>7}  {'trigger':>7}  {'illegal':>7}  "
                 f"{'fls':>6}  label     detected")
    for run in doc["runs"]:
        s, p = run["state"], run["perception"]
        lines.append(
            f"{run['run_id']:16}  {s['accuracy']:7.4f}  {s['trigger_accuracy']:7.4f}"
            f"  {len(s['illegal_jumps']):7d}  {p['score']:6.3f}  {p['label']:<8}"
            f"  {'yes' if p['detected'] else 'no'}"
        )
    agg = doc["aggregate"]
    per = agg["perception"]
    lines += [
        "",
        f"mean state accuracy   {agg['state_accuracy_mean']:.4f}",
        f"mean trigger accuracy {agg['trigger_accuracy_mean']:.4f}",
        f"illegal jumps         {agg['illegal_jumps_total']}",
        f"perception mean score detected={_fmt(per['mean_detected'])} "
        f"undetected={_fmt(per['mean_undetected'])} "
        f"({per['n_detected']} vs {per['n_undetected']} runs)",
    ]
    if per["digests"]:
        lines.append("strongest rules on undetected runs:")
        for run_id, rules in per["digests"].items():
            for r in rules:
                lines.append(f"  {run_id}  {' & '.join(r['antecedent'])}"
                             f"  (firing {r['f_up']:.3f})")
    return "\n".join(lines)


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.3f}"


def _render_train_report(doc) -> str:
    lines = [f"{doc['task']} training report for {doc['model']}",
             f"runs {doc['n_runs']} (train {doc['n_train_runs']}, "
             f"holdout {doc['n_holdout_runs']}); seed {doc['seed']}",
             f"train accuracy   {_fmt(doc['train_accuracy'])}",
             f"holdout accuracy {_fmt(doc['holdout_accuracy'])}",
             f"wall time        {doc['wall_time_s']:.1f}s"]
    if doc["curve"]:
        tail = doc["curve"][-5:]
        lines.append("curve tail: " + ", ".join(f"{i}:{a:.3f}" for i, a in tail))
    return "\n".join(lines)


def _render_manifest(doc) -> str:
    lines = [f"manifest: {doc['count']} runs from seed {doc['seed']}"]
    for run in doc["runs"]:
        lines.append(f"  {run['run_id']}  seed={run['seed']:<8}  "
                     f"{run['outcome']:<10}  {run['file']}")
    return "\n".join(lines)


def _cmd_report(args) -> int:
    doc = json.loads(Path(args.file).read_text(encoding="utf-8"))
    check_format_version(doc.get("format_version"), what=str(args.file))
    kind = doc.get("kind")
    renderers = {
        "evaluation": _render_evaluation,
        "train_report": _render_train_report,
        "manifest": _render_manifest,
    }
    if kind not in renderers:
        raise SchemaError(f"{args.file}: cannot render kind {kind!r}")
    print(renderers[kind](doc))
    return 0


# -- parser -------------------------------------------------------------------


def _add_common(sub, *, rate=True, window=True):
    sub.add_argument("--config", metavar="FILE",
                     help="KEY = VALUE file supplying defaults for any flag")
    if rate:
        sub.add_argument("--rate", type=float, default=None, metavar="HZ",
                         help="frame tick rate (default: the log's telemetry rate)")
    if window:
        sub.add_argument("--window", type=int, default=3,
                         help="feature window length in ticks (default 3)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dipt",
        description="Simulation-based T&E workbench for autonomous UAV behavior.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    index = {}

    sim = subs.add_parser("simulate", help="generate a batch of scenario runs")
    sim.add_argument("out", help="output directory for run logs + manifest.json")
    sim.add_argument("--count", type=int, default=10,
                     help="number of runs (default 10)")
    sim.add_argument("--seed", type=int, default=0,
                     help="first seed; runs use seed..seed+count-1 (default 0)")
    sim.add_argument("--area", type=float, nargs=2, default=[360.0, 300.0],
                     metavar=("W", "H"), help="search area size (default 360 300)")
    sim.add_argument("--visibility", type=float, nargs=2, default=[0.4, 1.0],
                     metavar=("LO", "HI"),
                     help="visibility sampling range (default 0.4 1.0)")
    sim.add_argument("--light", type=float, nargs=2, default=[0.4, 1.0],
                     metavar=("LO", "HI"),
                     help="light-level sampling range (default 0.4 1.0)")
    sim.add_argument("--target-absent", type=float, default=0.25, metavar="P",
                     help="probability the target is absent (default 0.25)")
    sim.add_argument("--target-margin", type=float, default=30.0, metavar="M",
                     help="target placement margin from area edges (default 30)")
    sim.add_argument("--timeout", type=float, default=240.0, metavar="S",
                     help="search timeout in seconds (default 240)")
    sim.add_argument("--uavs", type=int, default=1,
                     help="vehicles per run (default 1)")
    sim.add_argument("--altitude", type=float, nargs=2, default=[80.0, 140.0],
                     metavar=("LO", "HI"),
                     help="altitude sampling range (default 80 140)")
    sim.add_argument("--airspeed", type=float, nargs=2, default=[16.0, 24.0],
                     metavar=("LO", "HI"),
                     help="airspeed sampling range (default 16 24)")
    sim.add_argument("--rate", type=float, default=2.0, metavar="HZ",
                     help="telemetry rate (default 2.0)")
    sim.add_argument("--jobs", type=int, default=1,
                     help="parallel simulation workers (default 1)")
    sim.add_argument("--config", metavar="FILE",
                     help="KEY = VALUE file supplying defaults for any flag")
    sim.set_defaults(handler=_cmd_simulate)
    index["simulate"] = sim

    prep = subs.add_parser("prepare", help="preprocess one log into instances")
    prep.add_argument("log", help="run log (.jsonl)")
    prep.add_argument("--task", choices=("state", "transition"), default="state",
                      help="labeling task (default state)")
    prep.add_argument("--out", default=None, metavar="FILE",
                      help="output JSON path (default: stdout)")
    _add_common(prep)
    prep.set_defaults(handler=_cmd_prepare)
    index["prepare"] = prep

    tr = subs.add_parser("train", help="train a model from a manifest of runs")
    tr.add_argument("manifest", help="manifest.json from `dipt simulate`")
    tr.add_argument("--task", choices=("state", "search-end"), default="state",
                    help="what to fit (default state)")
    tr.add_argument("--out", default="model.jsonl", metavar="FILE",
                    help="model file to write (default model.jsonl)")
    tr.add_argument("--model", default=None, metavar="FILE",
                    help="base model to extend (required for --task search-end)")
    tr.add_argument("--report", default=None, metavar="FILE",
                    help="report path (default: <out>.report.json)")
    tr.add_argument("--seed", type=int, default=0,
                    help="training + split seed (default 0)")
    tr.add_argument("--train-frac", type=float, default=0.8, metavar="F",
                    help="fraction of runs used for training (default 0.8)")
    tr.add_argument("--iters", type=int, default=30000,
                    help="training iterations (default 30000)")
    tr.add_argument("--pop-size", type=int, default=2000, metavar="N",
                    help="rule population cap (default 2000)")
    tr.add_argument("--nu", type=float, default=10.0,
                    help="fitness sharpness exponent (default 10)")
    tr.add_argument("--train-size", type=int, default=9000, metavar="N",
                    help="training subsample per epoch cycle (default 9000)")
    _add_common(tr)
    tr.set_defaults(handler=_cmd_train)
    index["train"] = tr

    inf = subs.add_parser("infer", help="infer a state timeline for one log")
    inf.add_argument("log", help="run log (.jsonl)")
    inf.add_argument("--model", required=True, metavar="FILE",
                     help="model file from `dipt train`")
    inf.add_argument("--out", default=None, metavar="FILE",
                     help="output JSON path (default: stdout)")
    _add_common(inf)
    inf.set_defaults(handler=_cmd_infer)
    index["infer"] = inf

    ev = subs.add_parser("evaluate", help="score a model against truth")
    ev.add_argument("manifest", help="manifest.json of evaluation runs")
    ev.add_argument("--model", required=True, metavar="FILE",
                    help="model file from `dipt train`")
    ev.add_argument("--fls", default=None, metavar="FILE",
                    help="perception system JSON (default: built-in system)")
    ev.add_argument("--floor", type=float, default=0.0,
                    help="exit 2 when mean state accuracy is below this "
                         "(default 0: never fail)")
    ev.add_argument("--out", default=None, metavar="FILE",
                    help="output JSON path (default: stdout)")
    _add_common(ev)
    ev.set_defaults(handler=_cmd_evaluate)
    index["evaluate"] = ev

    sv = subs.add_parser("serve", help="serve the replay API over HTTP/WebSocket")
    sv.add_argument("--data", default=None, metavar="DIR",
                    help="run log directory (default: $DIPT_DATA_DIR)")
    sv.add_argument("--listen", default=None, metavar="HOST:PORT",
                    help="listen address (default: $DIPT_LISTEN or 127.0.0.1:8008)")
    sv.add_argument("--model", default=None, metavar="FILE",
                    help="model file for inferred-state overlays (default: none)")
    sv.add_argument("--fls", default=None, metavar="FILE",
                    help="perception system JSON (default: built-in system)")
    _add_common(sv, rate=False)
    sv.set_defaults(handler=_cmd_serve)
    index["serve"] = sv

    rep = subs.add_parser("report", help="render a JSON report as text")
    rep.add_argument("file", help="evaluation, train report, or manifest JSON")
    rep.add_argument("--config", metavar="FILE",
                     help="KEY = VALUE file supplying defaults for any flag")
    rep.set_defaults(handler=_cmd_report)
    index["report"] = rep

    return parser, index


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, index = build_parser()
    try:
        sub_name = next((t for t in argv if not t.startswith("-")), None)
        cfg_path = None
        for i, token in enumerate(argv):
            if token == "--config" and i + 1 < len(argv):
                cfg_path = argv[i + 1]
            elif token.startswith("--config="):
                cfg_path = token.split("=", 1)[1]
        if cfg_path is not None and sub_name in index:
            _apply_config(index[sub_name], read_config_file(cfg_path))
        args = parser.parse_args(argv)
        return args.handler(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
