import numpy as np
import pytest

from onebitpr.errors import DimensionMismatch, NonHermitianInput
from onebitpr.lifting import (LiftedMatrix, SensingEnsemble, SignalModel,
                              SignalVector, decode, embed, identity_coords,
                              lift_row, lift_rows, lifted_dim,
                              trace_from_coords)


def random_hermitian(rng, n, model):
    if model is SignalModel.REAL:
        A = rng.standard_normal((n, n))
        return (A + A.T) / 2.0
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2.0


def test_lifted_dim():
    assert lifted_dim(3, SignalModel.REAL) == 6
    assert lifted_dim(3, SignalModel.COMPLEX) == 9
    assert lifted_dim(1, SignalModel.REAL) == 1


def test_embed_identity_complex():
    coords = embed(np.eye(2, dtype=complex), SignalModel.COMPLEX)
    assert np.array_equal(coords[:2], [1.0, 1.0])
    assert np.all(coords[2:] == 0.0)
    assert np.isclose(np.linalg.norm(coords), np.sqrt(2.0))


def test_embed_zero():
    assert np.all(embed(np.zeros((3, 3)), SignalModel.REAL) == 0.0)


@pytest.mark.parametrize("model", [SignalModel.REAL, SignalModel.COMPLEX])
def test_isometry_against_trace_oracle(model):
    # brute-force oracle: Re Tr(H1 H2) from the direct matrix product
    rng = np.random.default_rng(11)
    for _ in range(1000):
        H1 = random_hermitian(rng, 3, model)
        H2 = random_hermitian(rng, 3, model)
        lhs = float(embed(H1, model) @ embed(H2, model))
        rhs = float(np.real(np.trace(H1 @ H2)))
        assert abs(lhs - rhs) <= 1e-10


def test_embed_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        embed(np.array([[0.0, 1.0], [0.0, 0.0]]), SignalModel.REAL)
    with pytest.raises(NonHermitianInput):
        # Hermitian but complex: not allowed in the real model
        embed(np.array([[1.0, 1j], [-1j, 1.0]]), SignalModel.REAL)


def test_embed_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        embed(np.zeros((2, 3)), SignalModel.REAL)


def test_lift_row_basis_vector():
    e1 = np.array([1.0, 0.0, 0.0])
    target = np.zeros((3, 3))
    target[0, 0] = 1.0
    assert np.allclose(lift_row(e1, SignalModel.REAL),
                       embed(target, SignalModel.REAL))


def test_lift_row_zero():
    assert np.all(lift_row(np.zeros(4), SignalModel.REAL) == 0.0)


def test_lift_row_complex_pair():
    # a = [1, i] must decode to [[1, -i], [i, 1]] (outer-product oracle)
    a = np.array([1.0, 1j])
    coords = lift_row(a, SignalModel.COMPLEX)
    H = decode(coords, 2, SignalModel.COMPLEX)
    assert np.allclose(H, np.array([[1.0, -1j], [1j, 1.0]]), atol=1e-14)
    assert np.allclose(H, np.outer(a, a.conj()), atol=1e-14)


@pytest.mark.parametrize("model", [SignalModel.REAL, SignalModel.COMPLEX])
def test_lift_row_norm(model):
    rng = np.random.default_rng(5)
    a = rng.standard_normal(4)
    if model is SignalModel.COMPLEX:
        a = a + 1j * rng.standard_normal(4)
    coords = lift_row(a, model)
    assert np.isclose(np.linalg.norm(coords), np.linalg.norm(a) ** 2)


@pytest.mark.parametrize("model", [SignalModel.REAL, SignalModel.COMPLEX])
def test_roundtrip(model):
    rng = np.random.default_rng(3)
    for n in (1, 2, 5):
        H = random_hermitian(rng, n, model)
        back = decode(embed(H, model), n, model)
        assert np.allclose(back, H, atol=1e-14)
        assert np.array_equal(back, back.conj().T)


def test_decode_length_check():
    with pytest.raises(DimensionMismatch):
        decode(np.zeros(5), 3, SignalModel.REAL)


def test_rank_one_lift_spectrum():
    rng = np.random.default_rng(9)
    a = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    H = decode(lift_row(a, SignalModel.COMPLEX), 5, SignalModel.COMPLEX)
    w = np.sort(np.linalg.eigvalsh(H))[::-1]
    norm_sq = float(np.linalg.norm(a) ** 2)
    assert np.isclose(w[0], norm_sq)
    assert np.all(np.abs(w[1:]) < 1e-10 * norm_sq)


def test_lift_rows_matches_single():
    rng = np.random.default_rng(2)
    A = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    L = lift_rows(A, SignalModel.COMPLEX)
    for j in range(6):
        assert np.allclose(L[j], lift_row(A[j], SignalModel.COMPLEX))


def test_trace_and_identity_coords():
    rng = np.random.default_rng(7)
    H = random_hermitian(rng, 4, SignalModel.COMPLEX)
    coords = embed(H, SignalModel.COMPLEX)
    assert np.isclose(trace_from_coords(coords, 4), np.real(np.trace(H)))
    ident = identity_coords(4, SignalModel.COMPLEX)
    assert np.allclose(decode(ident, 4, SignalModel.COMPLEX), np.eye(4))


def test_signal_vector_real_model_rejects_complex():
    with pytest.raises(DimensionMismatch):
        SignalVector(np.array([1.0 + 1j]), SignalModel.REAL)


def test_signal_vector_lifted():
    x = SignalVector(np.array([1.0, 2.0]), SignalModel.REAL)
    X = x.lifted()
    assert np.allclose(X.matrix(), np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert np.isclose(X.frobenius_norm(), np.linalg.norm(X.matrix()))
    assert np.isclose(X.trace(), 5.0)


def test_lifted_matrix_constructors():
    Z = LiftedMatrix.zero(3, SignalModel.REAL)
    assert np.all(Z.coords == 0.0)
    H = np.diag([1.0, 2.0, 3.0])
    M = LiftedMatrix.from_matrix(H, SignalModel.REAL)
    assert np.allclose(M.matrix(), H)
    with pytest.raises(DimensionMismatch):
        LiftedMatrix(np.zeros(4), 3, SignalModel.REAL)


def test_sensing_ensemble_row_norm_consistency():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((20, 4)) + 1j * rng.standard_normal((20, 4))
    ens = SensingEnsemble.from_rows(A, SignalModel.COMPLEX)
    for j in range(ens.m):
        V = np.outer(A[j], A[j].conj())
        # lifted rows are the embeds of V_j; norms match Frobenius norms
        assert np.allclose(ens.lifted_rows[j],
                           embed(V, SignalModel.COMPLEX), atol=1e-12)
        assert np.isclose(ens.row_sq_norms[j],
                          np.linalg.norm(V) ** 2, atol=1e-12)
    assert np.isclose(ens.total_sq_norm, ens.row_sq_norms.sum())
