"""Lindblad generator, steady-state solvers and a Runge-Kutta oracle.

Vectorization is column stacking throughout: ``vec(A X B) = (B^T kron A) vec(X)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .drives import JumpOperator, min_rate
from .errors import (CapacityError, ConvergenceError, DegenerateSteadyStateError,
                     InvalidInputError, StepSizeError)
from .pauli import embed

logger = logging.getLogger(__name__)

DENSE_MAX_SITES = 6
SPARSE_MAX_SITES = 8
# Largest chain solved by full SVD under method="auto"; above this the
# trace-deflated sparse LU path is used.
AUTO_SVD_MAX_SITES = 5

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10
# Hilbert-space dimension up to which RK4 steps use a tabulated propagator.
PROPAGATOR_MAX_DIM = 16
RK4_BLOCK = 1024


@dataclass
class SolverOptions:
    rank_tolerance: float = 1e-10
    residual_tolerance: float = 1e-10
    method: str = "auto"  # "auto", "svd" or "sparse"

    def __post_init__(self):
        if self.rank_tolerance <= 0 or self.residual_tolerance <= 0:
            raise InvalidInputError("solver tolerances must be positive")
        if self.method not in ("auto", "svd", "sparse"):
            raise InvalidInputError(f"unknown steady-state method {self.method!r}")


@dataclass
class SteadyStateResult:
    state: np.ndarray
    residual: float
    nullspace_dimension: int
    method: str = "nullspace"
    backend: str = "svd"
    smallest_singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _dim_sites(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2 ** n != dim:
        raise InvalidInputError(f"dimension {dim} is not a power of two")
    return n


def _embedded(jumps, n_sites, sparse=False):
    return [embed(j.matrix, j.site, n_sites, sparse=sparse) for j in jumps]


def _check_inputs(H, jumps, rho=None):
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidInputError(f"H must be square, got shape {H.shape}")
    n = _dim_sites(H.shape[0])
    for j in jumps:
        if not isinstance(j, JumpOperator):
            raise InvalidInputError("jumps must be JumpOperator instances")
        if not 1 <= j.site <= n:
            raise InvalidInputError(f"jump site {j.site} outside [1, {n}]")
    if rho is not None and np.shape(rho) != H.shape:
        raise InvalidInputError(f"state shape {np.shape(rho)} does not match H {H.shape}")
    return H, n


def apply_generator(H, jumps, rho) -> np.ndarray:
    """Right-hand side ``i[rho, H] + sum_k (L rho L^+ - {L^+ L, rho}/2)``."""
    H, n = _check_inputs(H, jumps, rho)
    rho = np.asarray(rho, dtype=complex)
    out = 1j * (rho @ H - H @ rho)
    for L in _embedded(jumps, n):
        Ld = L.conj().T
        LdL = Ld @ L
        out += L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL)
    return out


def _generator_dense(H, Ls):
    d = H.shape[0]
    eye = np.eye(d)
    M = 1j * (np.kron(H.T, eye) - np.kron(eye, H))
    for L in Ls:
        LdL = L.conj().T @ L
        M += np.kron(L.conj(), L) - 0.5 * (np.kron(eye, LdL) + np.kron(LdL.T, eye))
    return M


def _generator_sparse(H, Ls):
    d = H.shape[0]
    eye = sp.identity(d, dtype=complex, format="csr")
    Hs = sp.csr_matrix(H)
    M = 1j * (sp.kron(Hs.T, eye) - sp.kron(eye, Hs))
    for L in Ls:
        LdL = (L.conj().T @ L).tocsr()
        M = M + sp.kron(L.conj(), L) - 0.5 * (sp.kron(eye, LdL) + sp.kron(LdL.T, eye))
    return M.tocsc()


def build_superoperator(H, jumps, sparse: bool = False):
    """Matrix ``M`` with ``M @ vec(rho) == vec(apply_generator(H, jumps, rho))``."""
    H, n = _check_inputs(H, jumps)
    limit = SPARSE_MAX_SITES if sparse else DENSE_MAX_SITES
    if n > limit:
        kind = "sparse" if sparse else "dense"
        raise CapacityError(f"{kind} superoperator limited to N <= {limit}, got N = {n}")
    H = np.asarray(H, dtype=complex)
    if sparse:
        return _generator_sparse(H, _embedded(jumps, n, sparse=True))
    return _generator_dense(H, _embedded(jumps, n))


def dissipator_superoperator(jumps, n_sites: int) -> np.ndarray:
    """Dense superoperator of the dissipative part alone."""
    return build_superoperator(np.zeros((2 ** n_sites, 2 ** n_sites)), jumps)


def vec(rho) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, dim: int | None = None) -> np.ndarray:
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape(dim, dim, order="F")


def check_density_matrix(rho) -> None:
    """Raise ConvergenceError unless ``rho`` is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho)
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        raise ConvergenceError(f"state not Hermitian (deviation {herm:.3e})")
    tr = abs(np.trace(rho) - 1.0)
    if tr > TRACE_TOL:
        raise ConvergenceError(f"state trace off by {tr:.3e}")
    lam = np.linalg.eigvalsh(rho)[0]
    if lam < -POSITIVITY_TOL:
        raise ConvergenceError(f"state has negative eigenvalue {lam:.3e}")


def _physical(rho) -> np.ndarray:
    """Hermitize, normalize, and clip roundoff-negative eigenvalues."""
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    w, V = np.linalg.eigh(rho)
    if w[0] < -POSITIVITY_TOL:
        raise ConvergenceError(f"steady state has eigenvalue {w[0]:.3e} below -{POSITIVITY_TOL}")
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        rho = (V * w) @ V.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        rho = rho / np.trace(rho).real
    return rho


def _kernel_svd(H, jumps, rank_tol):
    M = build_superoperator(H, jumps)
    _, s, vh = la.svd(M, lapack_driver="gesdd")
    nullity = int(np.sum(s < rank_tol * s[0]))
    return vh[-1].conj(), nullity, s[-3:] / s[0], "svd"


def _kernel_sparse(H, jumps, rank_tol):
    """Null vector from ``(M + v v^+) x = v`` with ``v = vec(I)``.

    ``v`` spans the left kernel of a trace-preserving generator, so the
    deflated matrix is singular exactly when ``ker M`` has dimension > 1,
    with ``dim ker M = 1 + dim ker(M + v v^+)``.
    """
    M = build_superoperator(H, jumps, sparse=True)
    d = H.shape[0]
    diag = np.arange(d) * (d + 1)
    v = np.zeros(d * d, dtype=complex)
    v[diag] = 1.0
    rank_one = sp.csc_matrix((np.ones(d * d), (np.repeat(diag, d), np.tile(diag, d))),
                             shape=M.shape, dtype=complex)
    A = (M + rank_one).tocsc()
    try:
        lu = spla.splu(A)
    except RuntimeError as exc:
        raise DegenerateSteadyStateError(f"deflated generator is singular: {exc}") from exc
    x = lu.solve(v)
    # two smallest singular values of A by power iteration on (A A^+)^-1
    inv_gram = spla.LinearOperator(A.shape, dtype=complex,
                                   matvec=lambda y: lu.solve(lu.solve(y, trans="H")))
    rng = np.random.default_rng(0)
    v0 = rng.standard_normal(A.shape[0]) + 0j
    lam = spla.eigsh(inv_gram, k=2, which="LM", v0=v0, return_eigenvectors=False, tol=1e-8)
    small = np.sort(1.0 / np.sqrt(np.abs(lam)))
    smax = spla.svds(A, k=1, return_singular_vectors=False, random_state=0)[0]
    nullity = 1 + int(np.sum(small < rank_tol * smax))
    return x, nullity, small / smax, "sparse"


def steady_state(H, jumps, options: SolverOptions | None = None) -> SteadyStateResult:
    """Unique steady state of the Lindblad generator, with residual and kernel size."""
    options = options or SolverOptions()
    H, n = _check_inputs(H, jumps)
    method = options.method
    if method == "auto":
        method = "svd" if n <= AUTO_SVD_MAX_SITES else "sparse"
    if method == "svd":
        vector, nullity, small, backend = _kernel_svd(H, jumps, options.rank_tolerance)
    else:
        vector, nullity, small, backend = _kernel_sparse(H, jumps, options.rank_tolerance)
    if nullity != 1:
        raise DegenerateSteadyStateError(
            f"generator kernel has dimension {nullity}, expected 1", nullspace_dimension=nullity)
    rho = _physical(unvec(vector, H.shape[0]))
    residual = float(np.linalg.norm(apply_generator(H, jumps, rho)))
    bound = options.residual_tolerance * max(1.0, float(np.linalg.norm(H)))
    if residual > bound:
        raise ConvergenceError(f"steady-state residual {residual:.3e} exceeds {bound:.3e}")
    logger.debug("steady state N=%d backend=%s residual=%.2e", n, backend, residual)
    return SteadyStateResult(rho, residual, nullity, "nullspace", backend, np.asarray(small))


def default_time_step(H, jumps) -> float:
    """0.01 over the fastest scale: max of |H|_2 and the summed channel rates."""
    scale = max(float(np.linalg.norm(H, 2)), sum(j.rate for j in jumps), 1e-12)
    return 0.01 / scale


def default_final_time(jumps) -> float:
    return 200.0 / min_rate(jumps)


def time_evolve(H, jumps, rho0, t_final: float | None = None, dt: float | None = None,
                drift_tol: float = 1e-8) -> np.ndarray:
    """Fixed-step RK4 integration of the master equation from ``rho0``.

    The state is re-Hermitized and its trace reset after every step (every
    ``RK4_BLOCK`` steps on the tabulated small-system path).
    """
    H, n = _check_inputs(H, jumps, rho0)
    dt = default_time_step(H, jumps) if dt is None else float(dt)
    t_final = default_final_time(jumps) if t_final is None else float(t_final)
    if dt <= 0:
        raise InvalidInputError(f"dt must be positive, got {dt}")
    if t_final < dt:
        raise InvalidInputError(f"t_final ({t_final}) must be >= dt ({dt})")
    H = np.asarray(H, dtype=complex)
    Ls = np.array(_embedded(jumps, n)) if jumps else np.zeros((0,) + H.shape, dtype=complex)
    Lds = Ls.conj().transpose(0, 2, 1)
    # rho -> -i(H_eff rho - rho H_eff^+) + sum L rho L^+
    H_eff = H - 0.5j * np.einsum("kij,kjl->il", Lds, Ls)
    A = -1j * H_eff
    Ad = A.conj().T

    def rhs(r):
        out = A @ r + r @ Ad
        if len(Ls):
            out += (Ls @ r @ Lds).sum(axis=0)
        return out

    n_steps = int(round(t_final / dt))
    half = dt / 2

    def step(r):
        k1 = rhs(r)
        k2 = rhs(r + half * k1)
        k3 = rhs(r + half * k2)
        k4 = rhs(r + dt * k3)
        return r + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    d = H.shape[0]
    rho = np.array(rho0, dtype=complex)
    if d <= PROPAGATOR_MAX_DIM:
        return _evolve_tabulated(step, rho, n_steps, dt, drift_tol)

    tr_prev = np.trace(rho).real
    for _ in range(n_steps):
        rho = step(rho)
        tr = np.trace(rho).real
        if abs(tr - tr_prev) > drift_tol:
            raise StepSizeError(f"trace drifted by {abs(tr - tr_prev):.3e} in one step (dt={dt})")
        rho = 0.5 * (rho + rho.conj().T) * (tr_prev / tr)
    return rho


def _evolve_tabulated(step, rho, n_steps: int, dt: float, drift_tol: float) -> np.ndarray:
    # The RK4 step is linear in rho, so tabulate it on the matrix-unit basis and
    # advance in blocks of RK4_BLOCK steps using the block power of the step matrix.
    d = rho.shape[0]
    basis = np.eye(d * d, dtype=complex).reshape(d * d, d, d).transpose(0, 2, 1)
    P = np.stack([vec(step(b)) for b in basis], axis=1)
    # worst one-step trace change for a unit-trace-norm state
    drift = float(np.max(np.abs(vec(np.eye(d)).conj() @ P - vec(np.eye(d)).conj())))
    if drift > drift_tol:
        raise StepSizeError(f"trace drifts by up to {drift:.3e} per step (dt={dt})")
    n_blocks, rest = divmod(n_steps, RK4_BLOCK)
    block = np.linalg.matrix_power(P, RK4_BLOCK)
    v = vec(rho)
    tr_prev = np.trace(rho).real
    for _ in range(n_blocks):
        v = block @ v
        tr = np.trace(unvec(v, d)).real
        if abs(tr - tr_prev) > drift_tol:
            raise StepSizeError(f"trace drifted by {abs(tr - tr_prev):.3e} over "
                                f"{RK4_BLOCK} steps (dt={dt})")
        r = unvec(v, d)
        v = vec(0.5 * (r + r.conj().T) * (tr_prev / tr))
    v = np.linalg.matrix_power(P, rest) @ v
    r = unvec(v, d)
    return 0.5 * (r + r.conj().T) * (np.trace(rho).real / np.trace(r).real)


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b`` for Hermitian arguments."""
    return 0.5 * float(np.abs(np.linalg.eigvalsh(a - b)).sum())
