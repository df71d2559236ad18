"""Command-line interface: ``qubitdesign {lona,pso,eval,simulate,figure-data}``.

Settings resolve as built-in defaults < ``--config`` JSON file < explicit
flags. Every output embeds the resolved settings, so feeding that block
back through ``--config`` reproduces the run.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from ._validation import EnumerationCapError
from .lona import lona_schedule
from .objective import (
    expected_variance_exact,
    expected_variance_mc,
    make_objective,
    resolve_engine,
)
from .pso import PsoConfig, optimize
from .reference import SWARM
from .simulator import benchmark_schedule, run_trajectory

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAP = 3

DEFAULTS = {
    "n": None,
    "engine": "auto",
    "grid_size": 10_000,
    "cap": 16,
    "seed": 0,
    "out": None,
    "format": "csv",
    # pso
    "swarm_size": 16,
    "c1": 2.05,
    "c2": 2.05,
    "chi": None,
    "vmax": 2.0,
    "iters": 200,
    "init": "range",
    "radius": 0.5,
    "penalty": 10.0,
    "per_dimension_random": False,
    # eval / simulate
    "times": None,
    "file": None,
    "mc": False,
    "samples": 10_000,
    "omega": None,
    "trials": None,
    # figure-data
    "which": None,
    "pso_json": None,
}


_SHARED = ("n", "engine", "grid_size", "cap", "seed", "out", "format")
_SWARM = ("swarm_size", "c1", "c2", "chi", "vmax", "iters", "init", "radius", "penalty",
          "per_dimension_random")
COMMAND_KEYS = {
    "lona": _SHARED,
    "pso": _SHARED + _SWARM,
    "eval": _SHARED + ("times", "file", "mc", "samples"),
    "simulate": _SHARED + ("times", "file", "omega", "trials"),
    "figure-data": _SHARED + _SWARM + ("which", "pso_json"),
}


class UsageError(Exception):
    pass


def _times_arg(text):
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse times {text!r}")


def build_parser():
    S = argparse.SUPPRESS
    shared = argparse.ArgumentParser(add_help=False, argument_default=S)
    shared.add_argument("--n", type=int, help="number of measurements")
    shared.add_argument("--engine", choices=["auto", "fourier", "grid"])
    shared.add_argument("--grid-size", dest="grid_size", type=int)
    shared.add_argument("--cap", type=int, help="exact enumeration length cap")
    shared.add_argument("--seed", type=int)
    shared.add_argument("--out", help="output path (default: stdout)")
    shared.add_argument("--format", choices=["csv", "json"])
    shared.add_argument("--config", help="JSON file of settings")

    swarm = argparse.ArgumentParser(add_help=False, argument_default=S)
    swarm.add_argument("--swarm-size", dest="swarm_size", type=int)
    swarm.add_argument("--c1", type=float)
    swarm.add_argument("--c2", type=float)
    swarm.add_argument("--chi", type=float, help="override the derived constriction factor")
    swarm.add_argument("--vmax", type=float)
    swarm.add_argument("--iters", type=int)
    swarm.add_argument("--init", choices=["range", "around-lona"])
    swarm.add_argument("--radius", type=float)
    swarm.add_argument("--penalty", type=float)
    swarm.add_argument(
        "--per-dimension-random", dest="per_dimension_random", action="store_true"
    )

    schedule = argparse.ArgumentParser(add_help=False, argument_default=S)
    schedule.add_argument("--times", type=_times_arg, help="comma-separated evolution times")
    schedule.add_argument("--file", help="file holding evolution times")

    parser = argparse.ArgumentParser(prog="qubitdesign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("lona", parents=[shared], help="greedy integer schedule")
    sub.add_parser("pso", parents=[shared, swarm], help="swarm search over real schedules")
    p_eval = sub.add_parser("eval", parents=[shared, schedule], help="expected variance")
    p_eval.add_argument("--mc", action="store_true", default=S)
    p_eval.add_argument("--samples", type=int, default=S)
    p_sim = sub.add_parser("simulate", parents=[shared, schedule], help="simulate trajectories")
    p_sim.add_argument("--omega", type=float, default=S, help="true frequency (one trajectory)")
    p_sim.add_argument("--trials", type=int, default=S, help="benchmark over the prior")
    p_fig = sub.add_parser("figure-data", parents=[shared, swarm], help="plot data")
    p_fig.add_argument("which", choices=["fig1", "fig2"])
    p_fig.add_argument("--pso-json", dest="pso_json", default=S, help="saved pso JSON output")
    return parser


def resolve(args):
    given = vars(args).copy()
    command = given.pop("command")
    config_path = given.pop("config", None)
    config = {}
    if config_path is not None:
        try:
            config = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}")
        config.pop("command", None)
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    merged = {**DEFAULTS, **config, **given}
    return {"command": command, **{k: merged[k] for k in COMMAND_KEYS[command]}}


def _fmt(x):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % x


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if math.isnan(obj) else float(obj)
    return obj


def emit(cfg, header, rows, extra=None, payload=None, force_json=False):
    """Write a CSV table (with ``#`` comment header) or a JSON document."""
    extra = extra or {}
    if cfg["format"] == "json" or force_json:
        doc = payload if payload is not None else {
            **extra, "columns": header, "rows": [list(r) for r in rows]
        }
        text = json.dumps(_json_safe({**doc, "config": cfg}), indent=2) + "\n"
    else:
        lines = ["# config: " + json.dumps(_json_safe(cfg), sort_keys=True)]
        lines += [f"# {k}: {json.dumps(_json_safe(v))}" for k, v in extra.items()]
        lines.append(",".join(header))
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if cfg["out"] in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(cfg["out"]).write_text(text)


def _require_n(cfg):
    n = cfg["n"]
    if n is None or n < 1:
        raise UsageError("--n must be a positive integer")
    if n > cfg["cap"]:
        raise EnumerationCapError(f"--n {n} exceeds the enumeration cap {cfg['cap']}")
    return n


def _schedule(cfg):
    if cfg["times"] is not None:
        return list(cfg["times"])
    if cfg["file"] is not None:
        try:
            return _times_arg(Path(cfg["file"]).read_text().replace("\n", ","))
        except (OSError, argparse.ArgumentTypeError) as exc:
            raise UsageError(str(exc))
    raise UsageError("provide --times or --file")


def _pso_config(cfg, n):
    base = None
    if cfg["init"] == "around-lona":
        base = lona_schedule(n, cap=cfg["cap"]).schedule
    try:
        return PsoConfig(
            swarm_size=cfg["swarm_size"],
            c1=cfg["c1"],
            c2=cfg["c2"],
            chi=cfg["chi"],
            v_max=cfg["vmax"],
            penalty=cfg["penalty"],
            init="range" if cfg["init"] == "range" else "around_schedule",
            base_schedule=base,
            radius=cfg["radius"],
            iterations=cfg["iters"],
            seed=cfg["seed"],
            per_dimension_random=cfg["per_dimension_random"],
        )
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))


def _run_pso(cfg, n):
    pso_cfg = _pso_config(cfg, n)
    return optimize(pso_cfg, n, make_objective("grid", cfg["grid_size"], cfg["cap"]))


def cmd_lona(cfg):
    n = _require_n(cfg)
    trace = lona_schedule(n, cap=cfg["cap"])
    rows = [(k + 1, t, ev) for k, (t, ev) in enumerate(zip(trace.schedule, trace.per_step_ev))]
    payload = {
        "schedule": trace.schedule,
        "selection_order": trace.selection_order,
        "per_step_ev": trace.per_step_ev,
        "search_bounds": trace.search_bound_used,
    }
    emit(cfg, ["step", "time", "expected_variance"], rows, payload=payload)


def cmd_pso(cfg):
    n = _require_n(cfg)
    best, value, trace = _run_pso(cfg, n)
    extra = {"best_times": list(best), "best_ev": value}
    payload = {
        **extra,
        "trace": {
            "iteration": list(range(len(trace.best_ev))),
            "best_ev": trace.best_ev,
            "mean_ev": trace.mean_ev,
            "spread": trace.spread,
        },
    }
    emit(cfg, ["iteration", "best_ev", "mean_ev", "spread"], trace.rows(), extra, payload)


def cmd_eval(cfg):
    times = _schedule(cfg)
    try:
        engine = resolve_engine(times, cfg["engine"])
        if cfg["mc"]:
            report = expected_variance_mc(times, cfg["samples"], cfg["seed"], cfg["grid_size"])
        else:
            report = expected_variance_exact(times, engine, cfg["grid_size"], cfg["cap"])
    except EnumerationCapError:
        raise
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))
    payload = {
        "times": times,
        "expected_variance": report.expected_variance,
        "method": report.method,
        "engine": engine,
        "branches": report.branch_count,
    }
    if cfg["mc"]:
        payload["stderr"] = report.stderr
    emit(cfg, [], [], payload=payload, force_json=True)


def cmd_simulate(cfg):
    times = _schedule(cfg)
    try:
        if cfg["trials"] is not None:
            res = benchmark_schedule(times, cfg["trials"], cfg["seed"], cfg["grid_size"])
            payload = {
                "times": times,
                "trials": res.trials,
                "mean_squared_error": res.mean_squared_error,
                "mse_stderr": res.mse_stderr,
                "mean_posterior_variance": res.mean_posterior_variance,
                "stderr": res.stderr,
            }
        elif cfg["omega"] is not None:
            rec = run_trajectory(times, cfg["omega"], cfg["seed"], cfg["engine"], cfg["grid_size"])
            payload = {
                "times": list(rec.schedule),
                "true_omega": rec.true_omega,
                "outcomes": [o.value for o in rec.outcomes],
                "final_mean": rec.final_mean,
                "final_variance": rec.final_variance,
                "squared_error": rec.squared_error,
            }
        else:
            raise UsageError("provide --omega (one trajectory) or --trials (benchmark)")
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))
    emit(cfg, [], [], payload=payload, force_json=True)


def _saved_pso(path):
    try:
        doc = json.loads(Path(path).read_text())
        return doc["best_times"], doc["best_ev"], doc.get("trace")
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read pso output {path}: {exc}")


def cmd_figure_data(cfg):
    if cfg["which"] == "fig1":
        n = _require_n(cfg)
        swarm_points = {k: expected_variance_exact(v, "grid", cfg["grid_size"]).expected_variance
                        for k, v in SWARM.items() if k <= n}
        if cfg["pso_json"] is not None:
            best, value, _ = _saved_pso(cfg["pso_json"])
            swarm_points[len(best)] = value
        greedy = lona_schedule(n, cap=cfg["cap"]).per_step_ev
        rows = []
        for k in range(1, n + 1):
            linear = expected_variance_exact(list(range(1, k + 1)), "fourier", cap=cfg["cap"])
            rows.append((k, greedy[k - 1], linear.expected_variance, swarm_points.get(k)))
        emit(cfg, ["step", "lona_ev", "linear_ev", "pso_ev"], rows)
    else:
        if cfg["pso_json"] is not None:
            _, _, trace = _saved_pso(cfg["pso_json"])
            if trace is None:
                raise UsageError("saved pso output has no trace")
            rows = list(zip(trace["iteration"], trace["best_ev"], trace["mean_ev"], trace["spread"]))
        else:
            _, _, trace = _run_pso(cfg, _require_n(cfg))
            rows = trace.rows()
        emit(cfg, ["iteration", "best_ev", "mean_ev", "spread"], rows)


COMMANDS = {
    "lona": cmd_lona,
    "pso": cmd_pso,
    "eval": cmd_eval,
    "simulate": cmd_simulate,
    "figure-data": cmd_figure_data,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        COMMANDS[cfg["command"]](cfg)
    except UsageError as exc:
        print(f"qubitdesign {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationCapError as exc:
        print(f"qubitdesign {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
