"""Local bath-exchanging unitaries and the checks built on them.

Each unitary ``u`` acts identically on every site, ``U = u x u x ... x u``.
Matched with its drive family it must leave H and the energy-current
operators unchanged and carry the dissipator onto the one with the boundary
baths exchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .drives import DriveSpec, build_jump_operators, invert_baths
from .errors import InvalidInputError
from .liouvillian import apply_generator, dissipator_superoperator
from .models import ChainModel, build_hamiltonian
from .observables import energy_current_operator
from .pauli import pauli

UNITARY_FAMILIES = ("u1", "u2", "u3", "u4")
MATCHED_DRIVES = {"u1": "TwistedXY", "u2": "SixOpXXZ", "u3": "TwistedZX", "u4": "SixOpXXX"}
MATCHED_MODELS = {"u1": "XXZ", "u2": "XXZ", "u3": "XXX", "u4": "XXX"}
_TWISTED = ("u1", "u3")


@dataclass(frozen=True)
class LocalUnitary:
    matrix: np.ndarray
    family: str
    twist: float | None = None


def make_unitary(family: str, theta: float | None = None) -> LocalUnitary:
    if family not in UNITARY_FAMILIES:
        raise InvalidInputError(f"unitary family must be one of {UNITARY_FAMILIES}, got {family!r}")
    if family in _TWISTED and theta is None:
        raise InvalidInputError(f"{family} requires a twist angle theta")
    if family not in _TWISTED and theta is not None:
        raise InvalidInputError(f"{family} takes no twist angle")
    r2 = np.sqrt(2.0)
    if family == "u1":
        m = np.array([[0, 1 + 1j], [-np.exp(1j * theta) * (1 - 1j), 0]]) / r2
    elif family == "u2":
        m = np.array([[0, -1 + 1j], [1 + 1j, 0]]) / r2
    elif family == "u3":
        # i/sqrt2 [[sqrt(1-cos), sqrt(1+cos)], [sqrt(1+cos), -sqrt(1-cos)]] written with
        # signed half angles; identical on [0, pi], and keeps the sign of sin(theta) beyond it
        a, b = np.sin(theta / 2), np.cos(theta / 2)
        m = 1j * np.array([[a, b], [b, -a]])
    else:
        m = np.array([[1j, -1], [1, -1j]]) / r2
    return LocalUnitary(m.astype(complex), family, None if theta is None else float(theta))


def printed_u3(theta: float) -> np.ndarray:
    """u3 with the unsigned square roots, valid only for theta in [0, pi]."""
    c = np.cos(theta)
    a, b = np.sqrt(max(1 - c, 0.0)), np.sqrt(1 + c)
    return 1j / np.sqrt(2.0) * np.array([[a, b], [b, -a]])


def conjugation_table(u: LocalUnitary) -> dict:
    """Images u sigma u^+ of the three Pauli matrices."""
    m = u.matrix
    return {lab: m @ pauli(lab) @ m.conj().T for lab in "xyz"}


def expected_conjugation_table(u: LocalUnitary) -> dict:
    """Closed-form images of x, y, z under each unitary."""
    X, Y, Z = pauli("x"), pauli("y"), pauli("z")
    if u.family == "u1":
        s, c = np.sin(u.twist), np.cos(u.twist)
        return {
            "x": np.array([[0, -s - 1j * c], [-s + 1j * c, 0]]),
            "y": np.array([[0, c - 1j * s], [c + 1j * s, 0]]),
            "z": -Z,
        }
    if u.family == "u2":
        return {"x": -Y, "y": -X, "z": -Z}
    if u.family == "u3":
        s, c = np.sin(u.twist), np.cos(u.twist)
        return {
            "x": np.array([[s, c], [c, -s]], dtype=complex),
            "y": -Y,
            "z": np.array([[-c, s], [s, c]], dtype=complex),
        }
    return {"x": -X, "y": -Z, "z": -Y}


def global_unitary(u: LocalUnitary, n_sites: int) -> np.ndarray:
    if n_sites < 1:
        raise InvalidInputError(f"n_sites must be positive, got {n_sites}")
    return reduce(np.kron, [u.matrix] * n_sites)


def conjugate_superoperator(S: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> U S(U^+ X U) U^+`` for column-stacked ``S``."""
    d = U.shape[0]
    Ud = U.conj().T

    def left(T):
        # each column of T is a vectorized d x d matrix; map it to U . U^+
        cols = T.reshape(d, d, -1, order="F")
        return np.einsum("ia,abk,bj->ijk", U, cols, Ud, optimize=True).reshape(d * d, -1, order="F")

    # U S U^+ = (U (U S)^+)^+
    return left(left(S).conj().T).conj().T


def verify_hamiltonian_invariance(U: np.ndarray, H: np.ndarray) -> float:
    """Relative Frobenius deviation of U H U^+ from H."""
    U = _as_matrix(U)
    return float(np.linalg.norm(U @ H @ U.conj().T - H) / np.linalg.norm(H))


def _as_matrix(U):
    return U.matrix if isinstance(U, LocalUnitary) else np.asarray(U)


def _check_pair(u: LocalUnitary, spec: DriveSpec) -> None:
    if not isinstance(u, LocalUnitary):
        raise InvalidInputError("expected a LocalUnitary carrying its family label")
    if MATCHED_DRIVES[u.family] != spec.family:
        raise InvalidInputError(
            f"unitary {u.family} pairs with {MATCHED_DRIVES[u.family]}, not {spec.family}")
    if u.family in _TWISTED and not np.isclose(u.twist, spec["theta"], rtol=0, atol=1e-14):
        raise InvalidInputError(f"twist mismatch: unitary {u.twist}, drive {spec['theta']}")


def verify_dissipator_swap(u: LocalUnitary, spec: DriveSpec, n_sites: int) -> float:
    """|D_inverted - U D U^+|_F / |D|_F at the superoperator level."""
    _check_pair(u, spec)
    D = dissipator_superoperator(build_jump_operators(spec, n_sites), n_sites)
    D_inv = dissipator_superoperator(build_jump_operators(invert_baths(spec), n_sites), n_sites)
    U = global_unitary(u, n_sites)
    return float(np.linalg.norm(D_inv - conjugate_superoperator(D, U)) / np.linalg.norm(D))


def verify_current_invariance(U, model: ChainModel) -> float:
    """Worst relative deviation of U F_j U^+ from F_j over interior sites (field-free)."""
    n = model.n_sites
    if n < 3:
        raise InvalidInputError("energy currents need N >= 3")
    U = _as_matrix(U)
    if U.shape == (2, 2):
        U = reduce(np.kron, [U] * n)
    Ud = U.conj().T
    worst = 0.0
    for j in range(2, n):
        F = energy_current_operator(model, j, include_field=False)
        worst = max(worst, float(np.linalg.norm(U @ F @ Ud - F) / np.linalg.norm(F)))
    return worst


def mapped_state_residual(u: LocalUnitary, model: ChainModel, spec: DriveSpec, rho) -> float:
    """|generator_inverted(U rho U^+)|_F for a steady state ``rho`` of (model, spec)."""
    U = global_unitary(u, model.n_sites)
    H = build_hamiltonian(model)
    mapped = U @ rho @ U.conj().T
    jumps = build_jump_operators(invert_baths(spec), model.n_sites)
    return float(np.linalg.norm(apply_generator(H, jumps, mapped)))
