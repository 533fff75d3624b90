"""XXZ and XXX chain Hamiltonians with per-bond couplings and per-site fields."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInputError
from .pauli import pauli, pauli_string, embed

KINDS = ("XXZ", "XXX")


@dataclass(frozen=True)
class ChainModel:
    """Spin-1/2 chain with nearest-neighbour exchange.

    For ``kind="XXZ"`` ``alpha`` is a scalar and ``delta`` holds the N-1 bond
    anisotropies. For ``kind="XXX"`` ``alpha`` holds the N-1 bond couplings
    and ``delta`` is None. ``field`` holds N on-site z fields (zero default).
    """

    kind: str
    n_sites: int
    alpha: float | tuple
    delta: tuple | None = None
    field: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"model kind must be one of {KINDS}, got {self.kind!r}")
        n = int(self.n_sites)
        if n < 2:
            raise InvalidInputError(f"n_sites must be >= 2, got {self.n_sites}")
        object.__setattr__(self, "n_sites", n)
        if self.kind == "XXZ":
            if np.ndim(self.alpha) != 0:
                raise InvalidInputError("XXZ alpha must be a scalar")
            object.__setattr__(self, "alpha", float(self.alpha))
            if self.delta is None:
                raise InvalidInputError("XXZ model requires per-bond delta")
            object.__setattr__(self, "delta", _bond_tuple(self.delta, n - 1, "delta"))
        else:
            if self.delta is not None:
                raise InvalidInputError("XXX model takes no delta")
            alpha = self.alpha
            if np.ndim(alpha) == 0:
                alpha = [alpha] * (n - 1)
            object.__setattr__(self, "alpha", _bond_tuple(alpha, n - 1, "alpha"))
        fld = self.field
        if fld is None:
            fld = [0.0] * n
        elif np.ndim(fld) == 0:
            fld = [fld] * n
        object.__setattr__(self, "field", _bond_tuple(fld, n, "field"))

    def bond_alpha(self, i: int) -> float:
        """Transverse coupling on bond (i, i+1)."""
        return self.alpha if self.kind == "XXZ" else self.alpha[i - 1]

    def bond_delta(self, i: int) -> float:
        """Longitudinal coupling on bond (i, i+1)."""
        return self.delta[i - 1] if self.kind == "XXZ" else self.alpha[i - 1]

    def without_field(self) -> "ChainModel":
        return ChainModel(self.kind, self.n_sites, self.alpha, self.delta)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_sites": self.n_sites,
            "alpha": self.alpha if self.kind == "XXZ" else list(self.alpha),
            "delta": None if self.delta is None else list(self.delta),
            "field": list(self.field),
        }


def _bond_tuple(values, length: int, name: str) -> tuple:
    values = [float(v) for v in np.atleast_1d(values)]
    if len(values) != length:
        raise InvalidInputError(f"{name} must have length {length}, got {len(values)}")
    return tuple(values)


def xxz_chain(n_sites, alpha=1.0, delta=None, field=None) -> ChainModel:
    if delta is None:
        delta = [0.0] * (n_sites - 1)
    elif np.ndim(delta) == 0:
        delta = [delta] * (n_sites - 1)
    return ChainModel("XXZ", n_sites, alpha, delta, field)


def xxx_chain(n_sites, alpha=1.0, field=None) -> ChainModel:
    return ChainModel("XXX", n_sites, alpha, None, field)


def graded_profile(base: float, spread: float, n_bonds: int) -> list:
    """Linear ramp from ``base - spread`` to ``base + spread`` over ``n_bonds``.

    >>> graded_profile(1.0, 0.5, 3)
    [0.5, 1.0, 1.5]
    """
    if n_bonds < 1:
        raise InvalidInputError(f"n_bonds must be >= 1, got {n_bonds}")
    if n_bonds == 1:
        return [float(base)]
    return [float(base + spread * (2.0 * i / (n_bonds - 1) - 1.0)) for i in range(n_bonds)]


def bond_hamiltonian(model: ChainModel, i: int) -> np.ndarray:
    """Exchange term on bond (i, i+1), without field."""
    n = model.n_sites
    if not 1 <= i <= n - 1:
        raise InvalidInputError(f"bond {i} outside [1, {n - 1}]")
    sites = (i, i + 1)
    return (model.bond_alpha(i) * (pauli_string("xx", sites, n) + pauli_string("yy", sites, n))
            + model.bond_delta(i) * pauli_string("zz", sites, n))


def build_hamiltonian(model: ChainModel) -> np.ndarray:
    n = model.n_sites
    H = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(1, n):
        H += bond_hamiltonian(model, i)
    sz = pauli("z")
    for j, b in enumerate(model.field, start=1):
        if b:
            H += b * embed(sz, j, n)
    return H


def site_reversal(n_sites: int) -> np.ndarray:
    """Permutation matrix relabelling site j as N+1-j."""
    dim = 2 ** n_sites
    idx = np.arange(dim)
    bits = (idx[:, None] >> np.arange(n_sites)) & 1
    rev = (bits << np.arange(n_sites)[::-1]).sum(axis=1)
    P = np.zeros((dim, dim))
    P[rev, idx] = 1.0
    return P
