import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinchain_ness.errors import InvalidInputError
from spinchain_ness.models import (ChainModel, build_hamiltonian, graded_profile, site_reversal,
                                   xxx_chain, xxz_chain)
from spinchain_ness.pauli import embed, pauli

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def brute_pair(a, b, i, n):
    """Two-site term built from an explicit Kronecker loop."""
    out = np.array([[1.0 + 0j]])
    for k in range(1, n + 1):
        out = np.kron(out, a if k == i else b if k == i + 1 else np.eye(2))
    return out


def test_xx_model_two_sites():
    H = build_hamiltonian(xxz_chain(2, 1.0, [0.0], [0.0, 0.0]))
    np.testing.assert_allclose(H, np.kron(X, X) + np.kron(Y, Y))


def test_three_site_graded_setup():
    D, d = 1.3, 0.2
    m = xxz_chain(3, 1.0, graded_profile(D, d, 2))
    assert m.delta == pytest.approx((D - d, D + d))


def test_xxx_term_by_term():
    n, alpha = 3, [1.0, 2.0]
    expected = sum(alpha[i - 1] * (brute_pair(X, X, i, n) + brute_pair(Y, Y, i, n)
                                   + brute_pair(Z, Z, i, n)) for i in (1, 2))
    np.testing.assert_allclose(build_hamiltonian(xxx_chain(n, alpha)), expected)


def test_xxz_with_field_term_by_term(rng):
    n = 4
    delta = rng.uniform(0, 2, n - 1)
    field = rng.uniform(-1, 1, n)
    expected = sum(0.7 * (brute_pair(X, X, i, n) + brute_pair(Y, Y, i, n))
                   + delta[i - 1] * brute_pair(Z, Z, i, n) for i in range(1, n))
    expected = expected + sum(field[j - 1] * embed(Z, j, n) for j in range(1, n + 1))
    np.testing.assert_allclose(build_hamiltonian(xxz_chain(n, 0.7, delta, field)), expected,
                               atol=1e-13)


def test_graded_profile_examples():
    assert graded_profile(1.0, 0.5, 3) == pytest.approx([0.5, 1.0, 1.5])
    assert graded_profile(2.0, 0.3, 2) == pytest.approx([1.7, 2.3])
    assert graded_profile(1.5, 0.0, 4) == [1.5] * 4
    assert graded_profile(0.8, 0.2, 1) == [0.8]


def test_graded_profile_increasing():
    p = graded_profile(1.0, 0.25, 6)
    assert np.all(np.diff(p) > 0)
    assert np.mean(p) == pytest.approx(1.0)


def test_graded_profile_rejects_empty():
    with pytest.raises(InvalidInputError):
        graded_profile(1.0, 0.1, 0)


def test_length_mismatch_rejected():
    with pytest.raises(InvalidInputError):
        xxz_chain(4, 1.0, [1.0, 1.0])
    with pytest.raises(InvalidInputError):
        ChainModel("XXX", 3, [1.0, 2.0, 3.0])
    with pytest.raises(InvalidInputError):
        xxz_chain(3, 1.0, [1.0, 1.0], field=[0.0, 0.0])


def test_xxx_rejects_delta_and_unknown_kind():
    with pytest.raises(InvalidInputError):
        ChainModel("XXX", 3, 1.0, (1.0, 1.0))
    with pytest.raises(InvalidInputError):
        ChainModel("XY", 3, 1.0, (1.0, 1.0))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 5), base=st.floats(-2, 2), spread=st.floats(-1, 1),
       b=st.floats(-1, 1), kind=st.sampled_from(["XXZ", "XXX"]))
def test_hamiltonian_hermitian_and_mirror(n, base, spread, b, kind):
    prof = graded_profile(base, spread, n - 1)
    mirror = graded_profile(base, -spread, n - 1)
    if kind == "XXZ":
        H, Hm = (build_hamiltonian(xxz_chain(n, 0.9, p, b)) for p in (prof, mirror))
    else:
        H, Hm = (build_hamiltonian(xxx_chain(n, p, b)) for p in (prof, mirror))
    np.testing.assert_allclose(H, H.conj().T, atol=1e-14)
    P = site_reversal(n)
    np.testing.assert_allclose(P @ H @ P.T, Hm, atol=1e-12)


def test_uniform_xxz_conserves_magnetization():
    n = 4
    H = build_hamiltonian(xxz_chain(n, 1.0, 0.6, field=0.3))
    Mz = sum(embed(pauli("z"), j, n) for j in range(1, n + 1))
    np.testing.assert_allclose(H @ Mz - Mz @ H, 0, atol=1e-13)


def test_site_reversal_maps_site_labels():
    n = 3
    P = site_reversal(n)
    A = np.array([[0.2, 1.0], [0.5, -0.3]], dtype=complex)
    np.testing.assert_allclose(P @ embed(A, 1, n) @ P.T, embed(A, 3, n))
