"""Run configuration: JSON parsing, validation and defaults."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .drives import COMPATIBLE_KINDS, FAMILIES, DriveSpec
from .errors import ConfigError, InvalidInputError
from .liouvillian import SolverOptions
from .models import ChainModel, graded_profile

EXPERIMENTS = ("solve", "one_way", "benchmark3", "parity_scan", "symmetry_suite")
FORMATS = ("json", "csv")

_TOP_KEYS = {"experiment", "model", "drive", "solver", "output", "seed"}
_EXPERIMENT_KEYS = {
    "solve": {"model", "drive"},
    "one_way": {"model", "drive", "grid"},
    "benchmark3": {"Delta", "delta", "f", "B", "gamma"},
    "parity_scan": {"model", "gamma", "f_grid"},
    "symmetry_suite": {"n_sites_list", "theta_grid", "n_theta", "amplitude_draws", "end_to_end"},
}
_MODEL_KEYS = {"kind", "n_sites", "alpha", "delta", "field", "graded"}
_SOLVER_KEYS = {"rank_tolerance", "residual_tolerance", "time_evolution_crosscheck", "method"}
_OUTPUT_KEYS = {"path", "format"}
_GRID_KEYS = {"n_sites_list", "draws"}


@dataclass
class RunConfig:
    experiment: str
    model: ChainModel | None = None
    drive: DriveSpec | None = None
    solver: SolverOptions = field(default_factory=SolverOptions)
    time_evolution_crosscheck: bool = False
    output_path: str | None = None
    output_format: str = "json"
    seed: int = 42
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Resolved configuration; feeding it back to parse_config reproduces this object."""
        out = {"experiment": self.experiment}
        if self.model is not None:
            out["model"] = self.model.to_dict()
        if self.drive is not None:
            out["drive"] = self.drive.to_dict()
        out.update(self.params)
        out["solver"] = {
            "rank_tolerance": self.solver.rank_tolerance,
            "residual_tolerance": self.solver.residual_tolerance,
            "method": self.solver.method,
            "time_evolution_crosscheck": self.time_evolution_crosscheck,
        }
        out["output"] = {"path": self.output_path, "format": self.output_format}
        out["seed"] = self.seed
        return out


def _reject_unknown(section: str, given, allowed) -> None:
    unknown = sorted(set(given) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in {section}: {', '.join(unknown)}")


def _number(value, name, lo=None, hi=None, lo_open=False) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not np.isfinite(x):
        raise ConfigError(f"{name} must be finite")
    if lo is not None and (x < lo or (lo_open and x == lo)):
        bound = f"{name} > {lo}" if lo_open else f"{name} >= {lo}"
        if hi is not None:
            bound = f"{name} in [{lo}, {hi}]"
        raise ConfigError(f"{name} = {x} out of range: requires {bound}")
    if hi is not None and x > hi:
        raise ConfigError(f"{name} = {x} out of range: requires {name} in [{lo}, {hi}]")
    return x


def _integer(value, name, lo) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if value < lo:
        raise ConfigError(f"{name} = {value} out of range: requires {name} >= {lo}")
    return int(value)


def parse_model(raw: dict) -> ChainModel:
    if not isinstance(raw, dict):
        raise ConfigError("model must be an object")
    _reject_unknown("model", raw, _MODEL_KEYS)
    kind = raw.get("kind", "XXZ")
    if kind not in ("XXZ", "XXX"):
        raise ConfigError(f"model.kind must be XXZ or XXX, got {kind!r}")
    n = _integer(raw.get("n_sites", 3), "model.n_sites", 2)
    graded = raw.get("graded")
    if graded is not None:
        _reject_unknown("model.graded", graded, {"base", "spread"})
        profile = graded_profile(_number(graded.get("base", 1.0), "model.graded.base"),
                                 _number(graded.get("spread", 0.0), "model.graded.spread"), n - 1)
    try:
        if kind == "XXZ":
            if graded is not None and "delta" in raw:
                raise ConfigError("give either model.delta or model.graded, not both")
            delta = profile if graded is not None else raw.get("delta", 0.0)
            if np.ndim(delta) == 0:
                delta = [delta] * (n - 1)
            return ChainModel("XXZ", n, raw.get("alpha", 1.0), delta, raw.get("field"))
        if raw.get("delta") is not None:
            raise ConfigError("XXX model takes no delta")
        if graded is not None and "alpha" in raw:
            raise ConfigError("give either model.alpha or model.graded, not both")
        alpha = profile if graded is not None else raw.get("alpha", 1.0)
        return ChainModel("XXX", n, alpha, None, raw.get("field"))
    except ConfigError:
        raise
    except InvalidInputError as exc:
        raise ConfigError(f"model: {exc}") from exc


def parse_drive(raw: dict) -> DriveSpec:
    if not isinstance(raw, dict):
        raise ConfigError("drive must be an object")
    family = raw.get("family")
    if family not in FAMILIES:
        raise ConfigError(f"drive.family must be one of {FAMILIES}, got {family!r}")
    params = {k: v for k, v in raw.items() if k != "family"}
    if family in ("ZTarget", "TwistedXY", "TwistedZX"):
        params.setdefault("gamma", 1.0)
        _number(params["gamma"], "gamma", 0.0, lo_open=True)
    if family == "ZTarget":
        if "f" in params:
            if "f_left" in params or "f_right" in params:
                raise ConfigError("give either drive.f or drive.f_left/f_right, not both")
            f = _number(params.pop("f"), "f", -1.0, 1.0)
            params.update(f_left=f, f_right=-f)
        params.setdefault("f_left", 0.0)
        params.setdefault("f_right", 0.0)
        for k in ("f_left", "f_right"):
            _number(params[k], k, -1.0, 1.0)
    elif family.startswith("Twisted"):
        params.setdefault("theta", 0.0)
        params.setdefault("f", 0.0)
        _number(params["f"], "f", -1.0, 1.0)
        _number(params["theta"], "theta")
    else:
        for k in ("alpha", "beta", "p", "q", "u", "v"):
            if k in params:
                _number(params[k], k, 0.0)
    try:
        return DriveSpec(family, params)
    except InvalidInputError as exc:
        raise ConfigError(f"drive: {exc}") from exc


def parse_config(text: str | dict) -> RunConfig:
    """Validate a JSON document (or an already-decoded dict) into a RunConfig."""
    if isinstance(text, (str, bytes)):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}") from exc
    else:
        raw = dict(text)
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {experiment!r}")
    _reject_unknown("configuration", raw, _TOP_KEYS | _EXPERIMENT_KEYS[experiment])

    solver_raw = raw.get("solver", {}) or {}
    _reject_unknown("solver", solver_raw, _SOLVER_KEYS)
    rank_tol = _number(solver_raw.get("rank_tolerance", 1e-10), "solver.rank_tolerance", 0.0, lo_open=True)
    res_tol = _number(solver_raw.get("residual_tolerance", 1e-10), "solver.residual_tolerance", 0.0,
                      lo_open=True)
    method = solver_raw.get("method", "auto")
    if method not in ("auto", "svd", "sparse"):
        raise ConfigError(f"solver.method must be auto, svd or sparse, got {method!r}")
    solver = SolverOptions(rank_tol, res_tol, method)

    output_raw = raw.get("output", {}) or {}
    _reject_unknown("output", output_raw, _OUTPUT_KEYS)
    fmt = output_raw.get("format", "json")
    if fmt not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}, got {fmt!r}")
    seed = _integer(raw.get("seed", 42), "seed", 0)

    cfg = RunConfig(experiment, solver=solver,
                    time_evolution_crosscheck=bool(solver_raw.get("time_evolution_crosscheck", False)),
                    output_path=output_raw.get("path"), output_format=fmt, seed=seed)
    getattr(_ExperimentParser, experiment)(raw, cfg)
    return cfg


class _ExperimentParser:
    """Per-experiment section validation; each fills ``cfg`` in place."""

    @staticmethod
    def solve(raw, cfg):
        if "model" not in raw or "drive" not in raw:
            raise ConfigError("solve requires model and drive")
        cfg.model = parse_model(raw["model"])
        cfg.drive = parse_drive(raw["drive"])
        _check_pair(cfg.model, cfg.drive)

    @staticmethod
    def one_way(raw, cfg):
        if "grid" in raw:
            grid = raw["grid"]
            _reject_unknown("grid", grid, _GRID_KEYS)
            sizes = [_integer(n, "grid.n_sites_list", 3) for n in grid.get("n_sites_list", [3, 4])]
            cfg.params["grid"] = {"n_sites_list": sizes,
                                  "draws": _integer(grid.get("draws", 10), "grid.draws", 1)}
            return
        _ExperimentParser.solve(raw, cfg)
        if cfg.model.n_sites < 3:
            raise ConfigError("model.n_sites = 2 out of range: one_way requires n_sites >= 3")

    @staticmethod
    def benchmark3(raw, cfg):
        cfg.params = {
            "Delta": _number(raw.get("Delta", 1.0), "Delta"),
            "delta": _number(raw.get("delta", 0.0), "delta"),
            "f": _number(raw.get("f", 0.1), "f", -1.0, 1.0),
            "B": _number(raw.get("B", 0.0), "B"),
            "gamma": _number(raw.get("gamma", 1.0), "gamma", 0.0, lo_open=True),
        }

    @staticmethod
    def parity_scan(raw, cfg):
        cfg.model = parse_model(raw.get("model", {"kind": "XXZ", "n_sites": 3,
                                                  "graded": {"base": 1.0, "spread": 0.05}}))
        if any(cfg.model.field):
            raise ConfigError("parity_scan requires model.field = 0")
        grid = raw.get("f_grid", [0.05, 0.1, 0.2])
        cfg.params = {
            "gamma": _number(raw.get("gamma", 1.0), "gamma", 0.0, lo_open=True),
            "f_grid": [_number(f, "f_grid entry", -1.0, 1.0) for f in grid],
        }

    @staticmethod
    def symmetry_suite(raw, cfg):
        if "theta_grid" in raw and "n_theta" in raw:
            raise ConfigError("give either theta_grid or n_theta, not both")
        if "theta_grid" in raw:
            thetas = [_number(t, "theta_grid entry") for t in raw["theta_grid"]]
        else:
            n = _integer(raw.get("n_theta", 8), "n_theta", 1)
            thetas = [2 * np.pi * k / n for k in range(n)]
        cfg.params = {
            "n_sites_list": [_integer(n, "n_sites_list entry", 3)
                             for n in raw.get("n_sites_list", [3, 4, 5])],
            "theta_grid": thetas,
            "amplitude_draws": _integer(raw.get("amplitude_draws", 10), "amplitude_draws", 1),
            "end_to_end": bool(raw.get("end_to_end", True)),
        }


def _check_pair(model: ChainModel, drive: DriveSpec) -> None:
    if model.kind not in COMPATIBLE_KINDS[drive.family]:
        allowed = " or ".join(COMPATIBLE_KINDS[drive.family])
        raise ConfigError(f"incompatible model/drive: {drive.family} requires a {allowed} model, "
                          f"got {model.kind}")
