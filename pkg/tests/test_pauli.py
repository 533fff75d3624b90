import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinchain_ness.errors import InvalidInputError
from spinchain_ness.pauli import embed, pauli, product_chain


def test_pauli_z_is_diagonal_up_first():
    np.testing.assert_array_equal(pauli("z"), np.diag([1, -1]))


def test_plus_has_single_upper_entry():
    expected = np.zeros((2, 2))
    expected[0, 1] = 1
    np.testing.assert_array_equal(pauli("plus"), expected)


def test_commutator_xy():
    x, y, z = pauli("x"), pauli("y"), pauli("z")
    np.testing.assert_allclose(x @ y - y @ x, 2j * z)


@pytest.mark.parametrize("lab", ["x", "y", "z"])
def test_paulis_square_to_identity(lab):
    np.testing.assert_allclose(pauli(lab) @ pauli(lab), np.eye(2))


def test_ladder_definitions():
    x, y = pauli("x"), pauli("y")
    np.testing.assert_allclose(pauli("plus"), (x + 1j * y) / 2)
    np.testing.assert_allclose(pauli("minus"), (x - 1j * y) / 2)


def test_unknown_label_rejected():
    with pytest.raises(InvalidInputError):
        pauli("w")


def test_pauli_returns_copy():
    a = pauli("x")
    a[0, 0] = 5
    assert pauli("x")[0, 0] == 0


def test_embed_z_two_sites():
    np.testing.assert_array_equal(embed(pauli("z"), 1, 2), np.diag([1, 1, -1, -1]))
    np.testing.assert_array_equal(embed(pauli("z"), 2, 2), np.diag([1, -1, 1, -1]))


def test_embed_site_out_of_range():
    with pytest.raises(InvalidInputError):
        embed(pauli("x"), 0, 3)
    with pytest.raises(InvalidInputError):
        embed(pauli("x"), 4, 3)


def test_embeddings_on_distinct_sites_commute(rng):
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    a, b = embed(A, 1, 3), embed(B, 3, 3)
    np.testing.assert_allclose(a @ b, b @ a, atol=1e-14)


def test_embed_sparse_matches_dense(rng):
    A = rng.standard_normal((2, 2))
    np.testing.assert_allclose(embed(A, 2, 4, sparse=True).toarray(), embed(A, 2, 4))


def test_product_chain_two_sites():
    np.testing.assert_array_equal(product_chain([(pauli("x"), 1), (pauli("y"), 2)], 2),
                                  np.kron(pauli("x"), pauli("y")))


def test_empty_product_is_identity():
    np.testing.assert_array_equal(product_chain([], 2), np.eye(4))


def test_product_chain_matches_embed_products():
    ops = [(pauli("y"), 1), (pauli("z"), 2), (pauli("x"), 3)]
    brute = embed(pauli("y"), 1, 3) @ embed(pauli("z"), 2, 3) @ embed(pauli("x"), 3, 3)
    np.testing.assert_allclose(product_chain(ops, 3), brute)


def test_product_chain_duplicate_site_rejected():
    with pytest.raises(InvalidInputError):
        product_chain([(pauli("x"), 1), (pauli("y"), 1)], 2)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 5), data=st.data(), lab=st.sampled_from("xyz"))
def test_embedded_pauli_spectrum(n, data, lab):
    j = data.draw(st.integers(1, n))
    op = embed(pauli(lab), j, n)
    np.testing.assert_allclose(op, op.conj().T)
    w = np.linalg.eigvalsh(op)
    assert np.sum(np.isclose(w, 1)) == 2 ** (n - 1)
    assert np.sum(np.isclose(w, -1)) == 2 ** (n - 1)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 4), data=st.data(),
       a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_embed_linear_and_identity(n, data, a, b):
    j = data.draw(st.integers(1, n))
    A, B = pauli("x"), pauli("z")
    np.testing.assert_allclose(embed(a * A + b * B, j, n), a * embed(A, j, n) + b * embed(B, j, n),
                               atol=1e-12)
    np.testing.assert_array_equal(embed(pauli("identity"), j, n), np.eye(2 ** n))


@settings(max_examples=20, deadline=None)
@given(perm=st.permutations([0, 1, 2]))
def test_product_chain_order_independent(perm):
    ops = [(pauli("y"), 1), (pauli("plus"), 3), (pauli("z"), 4)]
    ref = product_chain(ops, 4)
    np.testing.assert_allclose(product_chain([ops[i] for i in perm], 4), ref)
