"""Single-site spin-1/2 operators and their many-body embeddings.

Basis convention: sigma^z eigenbasis with spin up first; site 1 is the
leftmost tensor factor. Sites are 1-indexed.
"""
from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import InvalidInputError

_PAULI = {
    "identity": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}
_ALIASES = {"i": "identity", "id": "identity", "+": "plus", "-": "minus"}

LABELS = tuple(_PAULI)


def pauli(label: str) -> np.ndarray:
    """Return a fresh 2x2 copy of the named single-site operator.

    Accepted labels: ``x``, ``y``, ``z``, ``plus``, ``minus``, ``identity``.
    """
    key = _ALIASES.get(label, label)
    if key not in _PAULI:
        raise InvalidInputError(f"unknown Pauli label {label!r}; expected one of {LABELS}")
    return _PAULI[key].copy()


def _check_local(op) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise InvalidInputError(f"local operator must be 2x2, got shape {op.shape}")
    return op


def _check_site(site: int, n_sites: int) -> None:
    if n_sites < 1:
        raise InvalidInputError(f"n_sites must be positive, got {n_sites}")
    if not 1 <= site <= n_sites:
        raise InvalidInputError(f"site {site} outside [1, {n_sites}]")


def embed(op, site: int, n_sites: int, sparse: bool = False):
    """Place ``op`` on ``site`` of an ``n_sites`` chain: I x ... x op x ... x I."""
    op = _check_local(op)
    _check_site(site, n_sites)
    left = 2 ** (site - 1)
    right = 2 ** (n_sites - site)
    if sparse:
        return sp.kron(sp.kron(sp.identity(left, dtype=complex, format="csr"), sp.csr_matrix(op)),
                       sp.identity(right, dtype=complex, format="csr"), format="csr")
    return np.kron(np.kron(np.eye(left, dtype=complex), op), np.eye(right, dtype=complex))


def product_chain(ops: Iterable[Tuple[np.ndarray, int]], n_sites: int, sparse: bool = False):
    """Product of local operators on pairwise distinct sites.

    Because the sites are distinct the factors commute, so the result is a
    single Kronecker product with identities in the unlisted slots.
    """
    ops = list(ops)
    slots: list = [None] * n_sites
    for op, site in ops:
        _check_site(site, n_sites)
        if slots[site - 1] is not None:
            raise InvalidInputError(f"site {site} appears more than once in product")
        slots[site - 1] = _check_local(op)
    factors = [np.eye(2, dtype=complex) if s is None else s for s in slots]
    if sparse:
        return reduce(lambda a, b: sp.kron(a, sp.csr_matrix(b), format="csr"), factors[1:],
                      sp.csr_matrix(factors[0]))
    return reduce(np.kron, factors)


def pauli_string(labels: Sequence[str], sites: Sequence[int], n_sites: int) -> np.ndarray:
    """Shorthand for ``product_chain`` over named Pauli operators."""
    return product_chain([(pauli(lab), s) for lab, s in zip(labels, sites)], n_sites)
