"""Command-line entry point.

    spinchain-ness solve|one-way|benchmark3|parity-scan|symmetry-suite \
        --config run.json [--out results.json] [--format json|csv] [--seed 7] [--plot]
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, parse_config
from .drives import build_jump_operators
from .errors import ConfigError
from .experiments import (run_one_way, run_one_way_grid, run_parity_scan,
                          run_symmetry_suite, run_three_site_benchmark, solve_and_measure)
from .liouvillian import time_evolve, trace_distance
from .models import build_hamiltonian

logger = logging.getLogger("spinchain_ness")

COMMANDS = {
    "solve": "solve",
    "one-way": "one_way",
    "benchmark3": "benchmark3",
    "parity-scan": "parity_scan",
    "symmetry-suite": "symmetry_suite",
}


def format_float(x: float) -> str:
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float printed to 17 significant digits (NaN as null)."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{to_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return "null" if not math.isfinite(obj) else format_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _flatten(record: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in record.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = ";".join(format_float(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, (float, np.floating)):
            out[key] = format_float(float(v))
        else:
            out[key] = v
    return out


def to_csv(results: list, resolved_config: dict) -> str:
    buf = io.StringIO()
    buf.write("# resolved_config: " + json.dumps(resolved_config, sort_keys=True) + "\n")
    rows = [_flatten(r) for r in results]
    fields = list(dict.fromkeys(k for r in rows for k in r))
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def execute(cfg: RunConfig) -> list:
    """Run the configured experiment and return its result records."""
    exp = cfg.experiment
    if exp == "solve":
        result, report = solve_and_measure(cfg.model, cfg.drive, cfg.solver)
        record = {"n_sites": cfg.model.n_sites, "nullspace_dimension": result.nullspace_dimension,
                  "residual": result.residual, "backend": result.backend, **report.to_dict()}
        if cfg.time_evolution_crosscheck:
            H = build_hamiltonian(cfg.model)
            jumps = build_jump_operators(cfg.drive, cfg.model.n_sites)
            d = H.shape[0]
            rho_t = time_evolve(H, jumps, np.eye(d) / d)
            record["time_evolution_trace_distance"] = trace_distance(rho_t, result.state)
        return [record]
    if exp == "one_way":
        if "grid" in cfg.params:
            grid = cfg.params["grid"]
            return [r.to_dict() for r in run_one_way_grid(grid["n_sites_list"], grid["draws"],
                                                          cfg.seed, cfg.solver)]
        return [run_one_way(cfg.model, cfg.drive, cfg.solver).to_dict()]
    if exp == "benchmark3":
        p = cfg.params
        return [run_three_site_benchmark(p["Delta"], p["delta"], p["f"], p["B"], cfg.solver,
                                         gamma=p["gamma"]).to_dict()]
    if exp == "parity_scan":
        return run_parity_scan(cfg.model, cfg.params["gamma"], cfg.params["f_grid"], cfg.solver)
    p = cfg.params
    return run_symmetry_suite(p["n_sites_list"], p["theta_grid"], p["amplitude_draws"],
                              cfg.seed, end_to_end=p["end_to_end"])


def render(cfg: RunConfig, results: list, timestamp: str | None = None) -> str:
    resolved = cfg.to_dict()
    if cfg.output_format == "csv":
        return to_csv(results, resolved)
    meta = {"version": __version__, "resolved_config": resolved}
    if timestamp is not None:
        meta["created"] = timestamp
    return to_json({"meta": meta, "results": results}) + "\n"


def _figure(cfg: RunConfig, results: list, path: Path) -> Path | None:
    from . import plotting

    target = path.with_suffix(".png")
    if cfg.experiment == "parity_scan":
        plotting.plot_parity_scan(results, target)
    elif cfg.experiment == "symmetry_suite":
        plotting.plot_symmetry_suite(results, target)
    elif cfg.experiment == "one_way":
        plotting.plot_one_way(results, target)
    elif cfg.experiment == "solve":
        plotting.plot_current_profile(results[0], target)
    else:
        return None
    return target


def run(cfg: RunConfig, plot: bool = False) -> int:
    """Execute, write the artifact(s), return a process exit status."""
    try:
        results = execute(cfg)
    except (ValueError, RuntimeError) as exc:
        logger.error("%s failed: %s", cfg.experiment, exc)
        return 2
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    text = render(cfg, results, stamp)
    try:
        if cfg.output_path:
            out = Path(cfg.output_path)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text, encoding="utf-8")
            if plot:
                fig = _figure(cfg, results, out)
                if fig is not None:
                    logger.info("wrote %s", fig)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        logger.error("could not write results: %s", exc)
        return 3
    if cfg.experiment == "symmetry_suite" and not all(r["passed"] for r in results):
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinchain-ness",
                                     description="Boundary-driven spin chain steady states and currents")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--out", help="output file (stdout if omitted)")
    parser.add_argument("--format", choices=("json", "csv"))
    parser.add_argument("--seed", type=int)
    parser.add_argument("--plot", action="store_true", help="write a PNG figure next to --out")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    experiment = COMMANDS[args.command]
    try:
        raw = {}
        if args.config:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
            # accept a previously emitted result file as its own config
            if isinstance(raw, dict) and "meta" in raw and "results" in raw:
                raw = raw["meta"]["resolved_config"]
        if raw.get("experiment", experiment) != experiment:
            raise ConfigError(f"config experiment {raw['experiment']!r} does not match "
                              f"command {args.command!r}")
        raw["experiment"] = experiment
        output = dict(raw.get("output") or {})
        if args.out:
            output["path"] = args.out
        if args.format:
            output["format"] = args.format
        raw["output"] = output
        if args.seed is not None:
            raw["seed"] = args.seed
        cfg = parse_config(raw)
    except (OSError, json.JSONDecodeError) as exc:
        logger.error("could not read config: %s", exc)
        return 3
    except ConfigError as exc:
        logger.error("invalid config: %s", exc)
        return 2
    if args.plot and not cfg.output_path:
        logger.error("--plot needs --out")
        return 2
    return run(cfg, plot=args.plot)


if __name__ == "__main__":
    sys.exit(main())
