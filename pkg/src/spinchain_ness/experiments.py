"""Experiment drivers: bath inversion, the three-site benchmark, parity scans
and the batch symmetry suite."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .drives import (COMPATIBLE_KINDS, DriveSpec, build_jump_operators, invert_baths,
                     six_op_xxx, six_op_xxz, twisted_xy, twisted_zx, z_target)
from .errors import InvalidInputError
from .liouvillian import SolverOptions, check_density_matrix, steady_state
from .models import ChainModel, build_hamiltonian, graded_profile, xxx_chain, xxz_chain
from .observables import measure
from .symmetry import (MATCHED_DRIVES, MATCHED_MODELS, global_unitary, make_unitary,
                       mapped_state_residual, verify_current_invariance,
                       verify_dissipator_swap, verify_hamiltonian_invariance)

logger = logging.getLogger(__name__)

WORKERS_ENV = "SPINCHAIN_NESS_WORKERS"
OPERATOR_TOL = 1e-12
END_TO_END_TOL = 1e-9
AMPLITUDE_RANGE = (0.1, 1.5)


@dataclass
class OneWayResult:
    family: str
    model: dict
    forward_energy_current: float
    inverted_energy_current: float
    absolute_difference: float
    forward_spin_current: float
    inverted_spin_current: float
    forward_nullspace_dimension: int = 1
    inverted_nullspace_dimension: int = 1
    max_residual: float = 0.0
    max_site_deviation_spin: float = 0.0
    max_site_deviation_energy: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class BenchmarkResult:
    Delta: float
    delta: float
    f: float
    B: float
    measured_current: float
    predicted_current: float
    relative_error: float

    def to_dict(self) -> dict:
        return asdict(self)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def parallel_map(fn, items) -> list:
    """Map in grid order, using a process pool when workers > 1."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def solve_and_measure(model: ChainModel, spec: DriveSpec, options: SolverOptions | None = None,
                      include_field: bool = True):
    """Steady state of (model, spec) and its current report."""
    H = build_hamiltonian(model)
    result = steady_state(H, build_jump_operators(spec, model.n_sites), options)
    check_density_matrix(result.state)
    return result, measure(result.state, model, include_field=include_field)


def _check_pairing(model: ChainModel, spec: DriveSpec) -> None:
    if model.kind not in COMPATIBLE_KINDS[spec.family]:
        raise InvalidInputError(f"{spec.family} drive is not defined for the {model.kind} model")


def run_one_way(model: ChainModel, spec: DriveSpec,
                options: SolverOptions | None = None) -> OneWayResult:
    """Energy and spin currents before and after exchanging the boundary baths."""
    if model.n_sites < 3:
        raise InvalidInputError("one-way comparison needs N >= 3")
    _check_pairing(model, spec)
    fwd, rep_f = solve_and_measure(model, spec, options, include_field=False)
    inv, rep_i = solve_and_measure(model, invert_baths(spec), options, include_field=False)
    F_f, F_i = rep_f.mean_energy_current, rep_i.mean_energy_current
    return OneWayResult(
        family=spec.family,
        model=model.to_dict(),
        forward_energy_current=F_f,
        inverted_energy_current=F_i,
        absolute_difference=abs(F_f - F_i),
        forward_spin_current=rep_f.mean_spin_current,
        inverted_spin_current=rep_i.mean_spin_current,
        forward_nullspace_dimension=fwd.nullspace_dimension,
        inverted_nullspace_dimension=inv.nullspace_dimension,
        max_residual=max(fwd.residual, inv.residual),
        max_site_deviation_spin=max(rep_f.max_site_deviation_spin, rep_i.max_site_deviation_spin),
        max_site_deviation_energy=max(rep_f.max_site_deviation_energy,
                                      rep_i.max_site_deviation_energy),
    )


def field_coefficient(Delta: float) -> float:
    """Leading B*f coefficient of the three-site energy current."""
    return 912.0 / (969.0 + 48.0 * Delta ** 2)


def asymmetry_coefficient(Delta: float) -> float:
    """Leading f^2*delta coefficient of the three-site energy current."""
    D2 = Delta ** 2
    return (32.0 * (20224.0 * D2 ** 2 + 64256.0 * D2 - 1083.0)
            / ((51.0 + 16.0 * D2) * (323.0 + 16.0 * D2) ** 2))


def predicted_three_site_current(Delta, delta, f, B) -> float:
    return B * f * field_coefficient(Delta) + f ** 2 * delta * asymmetry_coefficient(Delta)


def three_site_setup(Delta, delta, f, B, gamma=1.0):
    model = xxz_chain(3, 1.0, graded_profile(Delta, delta, 2), field=B)
    return model, z_target(gamma, f, -f)


def run_three_site_benchmark(Delta, delta, f, B, options: SolverOptions | None = None,
                             gamma: float = 1.0) -> BenchmarkResult:
    """Full steady-state energy current against the two-term small-f, small-delta series."""
    model, spec = three_site_setup(Delta, delta, f, B, gamma)
    _, report = solve_and_measure(model, spec, options)
    measured = report.mean_energy_current
    predicted = predicted_three_site_current(Delta, delta, f, B)
    rel = abs(measured - predicted) / max(abs(predicted), 1e-300)
    return BenchmarkResult(float(Delta), float(delta), float(f), float(B), measured, predicted, rel)


def run_parity_scan(model: ChainModel, gamma: float, f_grid,
                    options: SolverOptions | None = None) -> list:
    """Energy/spin currents at +f and -f (antisymmetric sigma^z targets, B = 0)."""
    if any(model.field):
        raise InvalidInputError("parity scan requires B = 0")
    rows = []
    for f in f_grid:
        cur = {}
        for sign, key in ((1, "plus"), (-1, "minus")):
            _, rep = solve_and_measure(model, z_target(gamma, sign * f, -sign * f), options)
            cur[key] = rep
        Fp, Fm = cur["plus"].mean_energy_current, cur["minus"].mean_energy_current
        Jp, Jm = cur["plus"].mean_spin_current, cur["minus"].mean_spin_current
        rows.append({
            "f": float(f),
            "energy_current_plus": Fp,
            "energy_current_minus": Fm,
            "spin_current_plus": Jp,
            "spin_current_minus": Jm,
            "energy_parity_defect": abs(Fp - Fm),
            "spin_parity_defect": abs(Jp + Jm),
        })
    return rows


# -- random instances ---------------------------------------------------------

def graded_model(kind: str, n_sites: int, base: float = 1.0, spread: float = 0.3) -> ChainModel:
    profile = graded_profile(base, spread, n_sites - 1)
    if kind == "XXZ":
        return xxz_chain(n_sites, 1.0, profile)
    return xxx_chain(n_sites, profile)


def random_model(kind: str, n_sites: int, rng) -> ChainModel:
    """Graded chain with base coupling in [0.5, 1.5] and spread in [0.1, 0.5]."""
    return graded_model(kind, n_sites, rng.uniform(0.5, 1.5), rng.uniform(0.1, 0.5))


def random_drive(family: str, rng, theta: float | None = None) -> DriveSpec:
    """Seeded draw; sigma^z targets are drawn antisymmetric, f_right = -f_left."""
    if family == "ZTarget":
        f = rng.uniform(-0.9, 0.9)
        return z_target(rng.uniform(0.5, 1.5), f, -f)
    if family in ("TwistedXY", "TwistedZX"):
        th = rng.uniform(0.0, 2 * np.pi) if theta is None else theta
        make = twisted_xy if family == "TwistedXY" else twisted_zx
        return make(rng.uniform(0.5, 1.5), rng.uniform(-0.9, 0.9), th)
    amps = rng.uniform(*AMPLITUDE_RANGE, size=6)
    return (six_op_xxz if family == "SixOpXXZ" else six_op_xxx)(*amps)


ONE_WAY_CASES = (
    ("XXZ", "ZTarget"), ("XXZ", "TwistedXY"), ("XXZ", "SixOpXXZ"),
    ("XXX", "ZTarget"), ("XXX", "TwistedZX"), ("XXX", "SixOpXXX"),
)


def one_way_instances(n_sites_list, draws: int, seed: int) -> list:
    """Deterministic (model, drive) grid over all families and sizes."""
    out = []
    for n in n_sites_list:
        for kind, family in ONE_WAY_CASES:
            rng = np.random.default_rng([seed, n, ONE_WAY_CASES.index((kind, family))])
            for _ in range(draws):
                out.append((random_model(kind, n, rng), random_drive(family, rng)))
    return out


def _one_way_task(args):
    model, spec, options = args
    return run_one_way(model, spec, options)


def run_one_way_grid(n_sites_list, draws: int, seed: int,
                     options: SolverOptions | None = None) -> list:
    tasks = [(m, s, options) for m, s in one_way_instances(n_sites_list, draws, seed)]
    return parallel_map(_one_way_task, tasks)


# -- symmetry suite -----------------------------------------------------------

def _symmetry_row(args) -> dict:
    family, n_sites, theta, draw, seed, solve = args
    rng = np.random.default_rng([seed, n_sites, int(family[1]), draw])
    drive_family = MATCHED_DRIVES[family]
    spec = random_drive(drive_family, rng, theta=theta)
    model = random_model(MATCHED_MODELS[family], n_sites, rng)
    u = make_unitary(family, spec["theta"] if theta is not None else None)
    H = build_hamiltonian(model)
    U = global_unitary(u, n_sites)
    row = {
        "pair": f"{family}/{drive_family}",
        "n_sites": n_sites,
        "theta": float("nan") if theta is None else float(theta),
        "draw": draw,
        "hamiltonian_deviation": verify_hamiltonian_invariance(U, H),
        "dissipator_deviation": verify_dissipator_swap(u, spec, n_sites),
        "current_deviation": verify_current_invariance(U, model),
        "end_to_end_residual": float("nan"),
        "error": "",
    }
    passed = max(row["hamiltonian_deviation"], row["dissipator_deviation"],
                 row["current_deviation"]) <= OPERATOR_TOL
    if solve:
        result = steady_state(H, build_jump_operators(spec, n_sites))
        row["end_to_end_residual"] = mapped_state_residual(u, model, spec, result.state)
        passed = passed and row["end_to_end_residual"] <= END_TO_END_TOL
    row["passed"] = bool(passed)
    return row


def _mismatch_row(n_sites: int, seed: int) -> dict:
    """Pair u1 with the six-operator XXZ drive; a rejection is the expected outcome."""
    rng = np.random.default_rng([seed, n_sites, 99])
    row = {"pair": "u1/SixOpXXZ", "n_sites": n_sites, "theta": 0.0, "draw": 0,
           "hamiltonian_deviation": float("nan"), "dissipator_deviation": float("nan"),
           "current_deviation": float("nan"), "end_to_end_residual": float("nan"),
           "error": "", "passed": False}
    try:
        verify_dissipator_swap(make_unitary("u1", 0.0), random_drive("SixOpXXZ", rng), n_sites)
    except InvalidInputError as exc:
        row["error"] = f"rejected: {exc}"
        row["passed"] = True
    return row


def default_theta_grid(n: int = 8) -> list:
    return [2 * np.pi * k / n for k in range(n)]


def run_symmetry_suite(n_sites_list=(3, 4, 5), theta_grid=None, amplitude_draws: int = 10,
                       seed: int = 42, end_to_end: bool = True,
                       include_mismatch: bool = True) -> list:
    """Deviation table for every matched (unitary, drive) pair over the grid."""
    theta_grid = default_theta_grid() if theta_grid is None else list(theta_grid)
    tasks = []
    for n in n_sites_list:
        for family in ("u1", "u2", "u3", "u4"):
            if family in ("u1", "u3"):
                tasks += [(family, n, float(th), k, seed, end_to_end)
                          for k, th in enumerate(theta_grid)]
            else:
                tasks += [(family, n, None, k, seed, end_to_end) for k in range(amplitude_draws)]
    rows = parallel_map(_symmetry_row, tasks)
    if include_mismatch:
        rows.append(_mismatch_row(min(n_sites_list), seed))
    return rows
