"""Boundary jump-operator families and the bath-inversion map.

Each family is written out exactly as its jump operators are defined, with
its own rate prefactor (the sigma^z-target family carries gamma/2, the
twisted families carry gamma, the six-operator families take raw
amplitudes).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidInputError
from .pauli import pauli

FAMILIES = ("ZTarget", "TwistedXY", "SixOpXXZ", "TwistedZX", "SixOpXXX")
SIX_OP_KEYS = ("alpha", "beta", "p", "q", "u", "v")
_PARAM_KEYS = {
    "ZTarget": ("gamma", "f_left", "f_right"),
    "TwistedXY": ("gamma", "f", "theta", "swapped"),
    "TwistedZX": ("gamma", "f", "theta", "swapped"),
    "SixOpXXZ": SIX_OP_KEYS,
    "SixOpXXX": SIX_OP_KEYS,
}
# Model kinds each family may drive.
COMPATIBLE_KINDS = {
    "ZTarget": ("XXZ", "XXX"),
    "TwistedXY": ("XXZ",),
    "SixOpXXZ": ("XXZ",),
    "TwistedZX": ("XXX",),
    "SixOpXXX": ("XXX",),
}

# Parameter relabelling that moves the site-1 amplitude table to site N.
_SIX_OP_INVERSION = {
    "SixOpXXZ": dict(alpha="beta", beta="alpha", p="v", q="u", u="q", v="p"),
    "SixOpXXX": dict(alpha="v", beta="u", p="q", q="p", u="beta", v="alpha"),
}

X, Y, Z = pauli("x"), pauli("y"), pauli("z")
SIGMA_PLUS, SIGMA_MINUS = pauli("plus"), pauli("minus")


@dataclass(frozen=True)
class JumpOperator:
    """One Lindblad channel: a 2x2 matrix (rate absorbed) on a boundary site."""

    site: int
    matrix: np.ndarray
    label: str = ""

    @property
    def rate(self) -> float:
        return float(np.linalg.norm(self.matrix, 2) ** 2)


@dataclass(frozen=True)
class DriveSpec:
    family: str
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"drive family must be one of {FAMILIES}, got {self.family!r}")
        keys = _PARAM_KEYS[self.family]
        params = dict(self.params)
        if self.family.startswith("Twisted"):
            params.setdefault("swapped", False)
        unknown = set(params) - set(keys)
        missing = set(keys) - set(params)
        if unknown:
            raise InvalidInputError(f"unknown {self.family} parameters: {sorted(unknown)}")
        if missing:
            raise InvalidInputError(f"missing {self.family} parameters: {sorted(missing)}")
        for k in keys:
            if k == "swapped":
                params[k] = bool(params[k])
            else:
                params[k] = float(params[k])
        _validate(self.family, params)
        object.__setattr__(self, "params", params)

    def __getitem__(self, key):
        return self.params[key]

    def to_dict(self) -> dict:
        return {"family": self.family, **self.params}


def _validate(family: str, params: dict) -> None:
    if family in ("SixOpXXZ", "SixOpXXX"):
        for k in SIX_OP_KEYS:
            if params[k] < 0:
                raise InvalidInputError(f"{family} amplitude {k} must be >= 0, got {params[k]}")
        return
    if params["gamma"] <= 0:
        raise InvalidInputError(f"gamma must be > 0, got {params['gamma']}")
    fkeys = ("f_left", "f_right") if family == "ZTarget" else ("f",)
    for k in fkeys:
        if not -1.0 <= params[k] <= 1.0:
            raise InvalidInputError(f"{k} must lie in [-1, 1], got {params[k]}")


def z_target(gamma=1.0, f_left=0.0, f_right=0.0) -> DriveSpec:
    return DriveSpec("ZTarget", dict(gamma=gamma, f_left=f_left, f_right=f_right))


def twisted_xy(gamma=1.0, f=0.0, theta=0.0, swapped=False) -> DriveSpec:
    return DriveSpec("TwistedXY", dict(gamma=gamma, f=f, theta=theta, swapped=swapped))


def twisted_zx(gamma=1.0, f=0.0, theta=0.0, swapped=False) -> DriveSpec:
    return DriveSpec("TwistedZX", dict(gamma=gamma, f=f, theta=theta, swapped=swapped))


def six_op_xxz(alpha, beta, p, q, u, v) -> DriveSpec:
    return DriveSpec("SixOpXXZ", dict(alpha=alpha, beta=beta, p=p, q=q, u=u, v=v))


def six_op_xxx(alpha, beta, p, q, u, v) -> DriveSpec:
    return DriveSpec("SixOpXXX", dict(alpha=alpha, beta=beta, p=p, q=q, u=u, v=v))


def _root(x: float) -> float:
    # 1 - |f| can come out as -1e-17 at |f| = 1
    return float(np.sqrt(max(x, 0.0)))


def _twisted_pairs(spec: DriveSpec):
    """(untwisted pair, twisted pair) as lists of (label, matrix)."""
    g, f, th = spec["gamma"], spec["f"], spec["theta"]
    c, s = np.cos(th), np.sin(th)
    if spec.family == "TwistedXY":
        fixed = (Y, Z)
        axis = c * X + s * Y
        other = Z
        name = "K"
    else:
        fixed = (X, Y)
        axis = c * X + s * Z
        other = Y
        name = "D"
    left = [(f"{name}L{sgn}", _root(g * (1 + k * f)) * (fixed[0] + k * 1j * fixed[1]) / 2)
            for sgn, k in (("+", 1), ("-", -1))]
    right = [(f"{name}R{sgn}", _root(g * (1 - k * f)) * (axis + k * 1j * other) / 2)
             for sgn, k in (("+", 1), ("-", -1))]
    return left, right


def _six_op_tables(spec: DriveSpec):
    a = spec.params
    ops = {
        "x+iy": X + 1j * Y, "x-iy": X - 1j * Y,
        "y+iz": Y + 1j * Z, "y-iz": Y - 1j * Z,
        "z+ix": Z + 1j * X, "z-ix": Z - 1j * X,
    }
    left_amp = dict(zip(ops, (a["alpha"], a["beta"], a["p"], a["q"], a["u"], a["v"])))
    if spec.family == "SixOpXXZ":
        right_amp = dict(zip(ops, (a["beta"], a["alpha"], a["v"], a["u"], a["q"], a["p"])))
    else:
        right_amp = dict(zip(ops, (a["v"], a["u"], a["q"], a["p"], a["beta"], a["alpha"])))
    left_names = ("L1", "L2", "V1", "V2", "W1", "W2")
    right_names = ("L3", "L4", "V3", "V4", "W3", "W4")
    left = [(nm, left_amp[k] * ops[k]) for nm, k in zip(left_names, ops)]
    right = [(nm, right_amp[k] * ops[k]) for nm, k in zip(right_names, ops)]
    return left, right


def build_jump_operators(spec: DriveSpec, n_sites: int) -> list:
    """All jump operators of ``spec`` on an ``n_sites`` chain (site 1 first)."""
    if n_sites < 2:
        raise InvalidInputError(f"boundary drives need n_sites >= 2, got {n_sites}")
    fam = spec.family
    if fam == "ZTarget":
        g = spec["gamma"]
        out = []
        for site, fv, side in ((1, spec["f_left"], "L"), (n_sites, spec["f_right"], "R")):
            out.append(JumpOperator(site, _root(g / 2 * (1 + fv)) * SIGMA_PLUS, f"{side}+"))
            out.append(JumpOperator(site, _root(g / 2 * (1 - fv)) * SIGMA_MINUS, f"{side}-"))
        return out
    if fam in ("TwistedXY", "TwistedZX"):
        left, right = _twisted_pairs(spec)
        if spec["swapped"]:
            left, right = right, left
    else:
        left, right = _six_op_tables(spec)
    return ([JumpOperator(1, m, nm) for nm, m in left]
            + [JumpOperator(n_sites, m, nm) for nm, m in right])


def invert_baths(spec: DriveSpec) -> DriveSpec:
    """Spec whose site-1 dissipator content is the original site-N content and vice versa."""
    p = dict(spec.params)
    fam = spec.family
    if fam == "ZTarget":
        p["f_left"], p["f_right"] = spec["f_right"], spec["f_left"]
    elif fam in ("TwistedXY", "TwistedZX"):
        p["swapped"] = not spec["swapped"]
    else:
        p = {new: spec[old] for new, old in _SIX_OP_INVERSION[fam].items()}
    return DriveSpec(fam, p)


def swap_sites(jumps, n_sites: int) -> list:
    """Same operators with site labels 1 and N exchanged."""
    flip = {1: n_sites, n_sites: 1}
    return [JumpOperator(flip.get(j.site, j.site), j.matrix, j.label) for j in jumps]


def min_rate(jumps) -> float:
    """Smallest nonzero channel rate, |L|_2^2."""
    rates = [j.rate for j in jumps if j.rate > 1e-14]
    if not rates:
        raise InvalidInputError("drive has no nonzero channel")
    return min(rates)
