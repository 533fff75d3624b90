"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the summary lines are printed
even when output capture is on).
"""
from __future__ import annotations

import time

import numpy as np
import pytest

from spinchain_ness.drives import FAMILIES, build_jump_operators
from spinchain_ness.experiments import (
    ONE_WAY_CASES,
    asymmetry_coefficient,
    field_coefficient,
    graded_model,
    random_drive,
    random_model,
    run_one_way_grid,
    run_parity_scan,
    run_symmetry_suite,
    run_three_site_benchmark,
    solve_and_measure,
    three_site_setup,
)
from spinchain_ness.liouvillian import check_density_matrix, steady_state, time_evolve, trace_distance
from spinchain_ness.models import build_hamiltonian
from spinchain_ness.symmetry import (
    UNITARY_FAMILIES,
    conjugation_table,
    expected_conjugation_table,
    make_unitary,
)

SEED = 2024


def report(pytestconfig, number: int, ok: bool, detail: str) -> None:
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")


def site_independent(dev: float, mean: float) -> bool:
    return dev <= 1e-9 * max(1.0, abs(mean))


@pytest.fixture(scope="module")
def one_way_rows():
    t0 = time.perf_counter()
    rows = run_one_way_grid((3, 4, 5, 6), draws=10, seed=SEED)
    return rows, time.perf_counter() - t0


def cross_validation_instances():
    out = []
    for k in range(20):
        kind, family = ONE_WAY_CASES[k % len(ONE_WAY_CASES)]
        rng = np.random.default_rng([SEED, 3, k])
        out.append((random_model(kind, 3, rng), random_drive(family, rng)))
    return out


def test_criterion_1_field_coefficient(pytestconfig):
    t0 = time.perf_counter()
    res = run_three_site_benchmark(Delta=1.0, delta=0.0, f=0.01, B=1.0)
    elapsed = time.perf_counter() - t0
    coeff = res.measured_current / (res.B * res.f)
    rel = abs(coeff - field_coefficient(1.0)) / field_coefficient(1.0)
    ok = rel <= 1e-3 and elapsed < 1.0
    report(pytestconfig, 1, ok, f"<F>/(Bf) = {coeff:.8f} vs {field_coefficient(1.0):.8f}, "
           f"rel err {rel:.2e} (<= 1e-3), {elapsed:.3f} s (< 1 s)")
    assert ok


def test_criterion_2_asymmetry_coefficient(pytestconfig):
    t0 = time.perf_counter()
    coarse = run_three_site_benchmark(Delta=1.0, delta=0.05, f=0.1, B=0.0)
    elapsed = time.perf_counter() - t0
    fine = run_three_site_benchmark(Delta=1.0, delta=0.025, f=0.05, B=0.0)
    expected = asymmetry_coefficient(1.0) * 0.1**2 * 0.05
    assert coarse.predicted_current == pytest.approx(expected, rel=1e-15)
    ok = coarse.relative_error <= 0.05 and fine.relative_error < coarse.relative_error \
        and elapsed < 1.0
    report(pytestconfig, 2, ok, f"<F> = {coarse.measured_current:.6e} vs {expected:.6e}, "
           f"rel err {coarse.relative_error:.2%} (<= 5%), refined {fine.relative_error:.2%} "
           f"(decreasing), {elapsed:.3f} s (< 1 s)")
    assert ok


@pytest.mark.slow
def test_criterion_3_one_way_street(pytestconfig, one_way_rows):
    rows, elapsed = one_way_rows
    worst = max(r.absolute_difference / max(1.0, abs(r.forward_energy_current)) for r in rows)
    fails = [r for r in rows
             if r.absolute_difference > 1e-9 * max(1.0, abs(r.forward_energy_current))]
    ok = len(rows) == 240 and not fails and elapsed < 1800
    report(pytestconfig, 3, ok, f"{len(rows)} instances, {len(fails)} failures, worst scaled "
           f"|dF| {worst:.2e} (<= 1e-9), {elapsed:.0f} s (< 1800 s)")
    assert ok


def test_criterion_4_parity(pytestconfig):
    model = graded_model("XXZ", 3, base=1.0, spread=0.05)
    rows = run_parity_scan(model, 1.0, (0.05, 0.1, 0.2))
    even = max(r["energy_parity_defect"] for r in rows)
    odd = max(r["spin_parity_defect"] for r in rows)
    nontrivial = all(abs(r["energy_current_plus"]) > 1e-8 for r in rows)
    ok = even <= 1e-10 and odd <= 1e-10 and nontrivial
    report(pytestconfig, 4, ok, f"energy evenness defect {even:.2e}, spin oddness defect "
           f"{odd:.2e} (both <= 1e-10)")
    assert ok


def test_criterion_5_symmetry_suite(pytestconfig):
    rows = run_symmetry_suite((3, 4, 5), amplitude_draws=10, seed=SEED, end_to_end=False,
                              include_mismatch=False)
    worst = max(max(r["hamiltonian_deviation"], r["dissipator_deviation"],
                    r["current_deviation"]) for r in rows)
    table_dev = 0.0
    for family in UNITARY_FAMILIES:
        thetas = np.linspace(0.0, 2 * np.pi, 8, endpoint=False) if family in ("u1", "u3") \
            else [None]
        for th in thetas:
            u = make_unitary(family, th)
            got, want = conjugation_table(u), expected_conjugation_table(u)
            table_dev = max(table_dev, max(np.max(np.abs(got[k] - want[k])) for k in want))
    pairs = {r["pair"] for r in rows}
    ok = worst <= 1e-12 and table_dev <= 1e-14 and len(pairs) == 4 and len(rows) == 3 * 36
    report(pytestconfig, 5, ok, f"{len(rows)} rows over {sorted(pairs)}, worst operator "
           f"deviation {worst:.2e} (<= 1e-12), table deviation {table_dev:.2e} (<= 1e-14)")
    assert ok


@pytest.mark.slow
def test_criterion_6_solver_cross_validation(pytestconfig):
    distances, nullities, families = [], [], set()
    for model, spec in cross_validation_instances():
        H = build_hamiltonian(model)
        jumps = build_jump_operators(spec, model.n_sites)
        res = steady_state(H, jumps)
        rho_t = time_evolve(H, jumps, np.eye(8) / 8)
        distances.append(trace_distance(res.state, rho_t))
        nullities.append(res.nullspace_dimension)
        families.add(spec.family)
    worst = max(distances)
    ok = worst <= 1e-6 and set(nullities) == {1} and families == set(FAMILIES)
    report(pytestconfig, 6, ok, f"{len(distances)} instances over {len(families)} families, "
           f"worst trace distance {worst:.2e} (<= 1e-6), nullities {sorted(set(nullities))}")
    assert ok


@pytest.mark.slow
def test_criterion_7_structural_invariants(pytestconfig, one_way_rows):
    checked, bad = 0, []
    rows, _ = one_way_rows
    for r in rows:
        checked += 2
        scale_f = min(abs(r.forward_energy_current), abs(r.inverted_energy_current))
        scale_j = min(abs(r.forward_spin_current), abs(r.inverted_spin_current))
        if not (site_independent(r.max_site_deviation_energy, scale_f)
                and site_independent(r.max_site_deviation_spin, scale_j)):
            bad.append(r)
    small = [three_site_setup(1.0, 0.0, 0.01, 1.0), three_site_setup(1.0, 0.05, 0.1, 0.0),
             three_site_setup(1.0, 0.025, 0.05, 0.0)]
    for f in (0.05, 0.1, 0.2):
        for sign in (1, -1):
            small.append(three_site_setup(1.0, 0.05, sign * f, 0.0))
    small += cross_validation_instances()
    for model, spec in small:
        res, rep = solve_and_measure(model, spec)
        check_density_matrix(res.state)
        checked += 1
        if not (site_independent(rep.max_site_deviation_energy, rep.mean_energy_current)
                and site_independent(rep.max_site_deviation_spin, rep.mean_spin_current)):
            bad.append((model, spec))
    ok = not bad
    report(pytestconfig, 7, ok, f"{checked} steady states pass Hermiticity/trace/positivity; "
           f"{len(bad)} site-independence violations (tol 1e-9 max(1,|mean|))")
    assert ok
