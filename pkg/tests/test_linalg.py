import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from buzano_lab.linalg import (
    DEFAULT_TOL,
    Tolerances,
    abs_op,
    adjoint,
    herm_eig,
    identity,
    inner,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    min_modulus,
    numerical_rank,
    op_norm,
    psd_sqrt,
    rank_one,
    save_matrix,
    svd,
    trace,
)

from conftest import cgauss

SHIFT3 = np.eye(3, k=-1)
N2 = np.array([[0, 1], [0, 0]], dtype=complex)


def test_inner_examples():
    s = 1 / np.sqrt(2)
    assert inner([1, 0], [0, 1]) == 0
    assert inner([1, 1j], [1, 1j]) == pytest.approx(2)
    assert inner([1, 0], [s, s]) == pytest.approx(s)
    # linear in the first slot, conjugate-linear in the second
    assert inner([1j, 0], [1, 0]) == pytest.approx(1j)
    assert inner([1, 0], [1j, 0]) == pytest.approx(-1j)


def test_norm_and_min_modulus_examples():
    assert op_norm(identity(4)) == pytest.approx(1)
    assert op_norm(np.diag([2, -1])) == pytest.approx(2)
    assert op_norm(SHIFT3) == pytest.approx(1)
    assert min_modulus(identity(3)) == pytest.approx(1)
    assert min_modulus(np.diag([3, 0.5])) == pytest.approx(0.5)
    assert min_modulus(N2) == 0


def test_trace_and_rank_one():
    assert trace(identity(3)) == 3
    assert trace(np.diag([1 + 1j, 2])) == 3 + 1j
    np.testing.assert_array_equal(rank_one([1, 0], [0, 1]), N2)
    np.testing.assert_array_equal(rank_one([1, 0], [1, 0]), np.diag([1, 0]))


def test_trace_of_rank_one_is_inner(rng):
    for n in range(1, 8):
        x, y = cgauss(rng, n), cgauss(rng, n)
        assert abs(trace(rank_one(x, y)) - inner(x, y)) <= 1e-14 * (1 + np.linalg.norm(x) * np.linalg.norm(y))
        assert numerical_rank(rank_one(x, y)) == 1


@pytest.mark.parametrize("method", ["jacobi", "lapack"])
def test_herm_eig_examples(method):
    lam, _ = herm_eig(np.diag([1.0, 3.0]), method=method)
    np.testing.assert_allclose(lam, [3, 1])
    lam, _ = herm_eig(np.array([[0, 1], [1, 0]]), method=method)
    np.testing.assert_allclose(lam, [1, -1], atol=1e-14)


@pytest.mark.parametrize("method", ["jacobi", "lapack"])
def test_herm_eig_reconstructs(rng, method):
    for n in (1, 2, 5, 16):
        G = cgauss(rng, n, n)
        H = (G + adjoint(G)) / 2
        lam, V = herm_eig(H, method=method)
        assert np.all(np.diff(lam) <= 0)
        assert np.linalg.norm(adjoint(V) @ V - np.eye(n)) <= 1e-12
        assert np.linalg.norm((V * lam) @ adjoint(V) - H, 2) <= 10 * DEFAULT_TOL.eig_tol * max(1, op_norm(H)) * n


def test_svd_examples(rng):
    _, s, _ = svd(np.array([[-2.0]]))
    np.testing.assert_allclose(s, [2])
    _, s, _ = svd(N2)
    np.testing.assert_allclose(s, [1, 0])
    for n in (2, 4, 7):
        T = cgauss(rng, n, n)
        U, s, W = svd(T)
        assert np.linalg.norm((U * s) @ adjoint(W) - T, 2) <= 1e-12 * op_norm(T)
        lam, _ = herm_eig(psd_sqrt(adjoint(T) @ T))
        np.testing.assert_allclose(s, lam, atol=1e-10 * op_norm(T))


def test_psd_sqrt_and_abs(rng):
    np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2, 3]), atol=1e-14)
    np.testing.assert_allclose(psd_sqrt(identity(3)), identity(3), atol=1e-14)
    G = cgauss(rng, 5, 3)
    P = G @ adjoint(G)
    R = psd_sqrt(P)
    assert np.linalg.norm(R @ R - P) <= 1e-10 * op_norm(P)
    np.testing.assert_allclose(abs_op(np.array([[-3.0]])), [[3]])
    np.testing.assert_allclose(abs_op(SHIFT3), np.diag([1, 1, 0]), atol=1e-14)
    Q, _ = np.linalg.qr(cgauss(rng, 4, 4))
    np.testing.assert_allclose(abs_op(Q), identity(4), atol=1e-12)


def test_abs_preserves_norms(rng):
    for n in (2, 3, 8):
        T = cgauss(rng, n, n)
        A = abs_op(T)
        for _ in range(5):
            x = cgauss(rng, n)
            assert abs(np.linalg.norm(A @ x) - np.linalg.norm(T @ x)) <= 1e-8 * np.linalg.norm(T @ x)


def test_tolerances_validate():
    with pytest.raises(ValueError):
        Tolerances(check_tol=0)
    with pytest.raises(ValueError):
        Tolerances(eig_tol=float("nan"))
    assert DEFAULT_TOL.allowance(10) == pytest.approx(11e-9)


def test_matrix_json_round_trip(tmp_path, rng):
    T = cgauss(rng, 3, 3)
    np.testing.assert_array_equal(matrix_from_json(json.loads(json.dumps(matrix_to_json(T)))), T)
    p = tmp_path / "t.json"
    save_matrix(p, T)
    np.testing.assert_array_equal(load_matrix(p), T)


def test_matrix_json_rejects_garbage():
    with pytest.raises(ValueError):
        matrix_from_json({"n": 2, "data": [[1, 0]]})


cplx = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(arrays(complex, (3, 3), elements=cplx), arrays(complex, 3, elements=cplx), arrays(complex, 3, elements=cplx))
def test_adjoint_consistency(T, x, y):
    lhs = inner(T @ x, y)
    rhs = inner(x, adjoint(T) @ y)
    scale = 1 + op_norm(T) * np.linalg.norm(x) * np.linalg.norm(y)
    assert abs(lhs - rhs) <= 1e-10 * scale


@settings(max_examples=60, deadline=None)
@given(arrays(complex, (4, 4), elements=cplx), arrays(complex, (4, 4), elements=cplx))
def test_norm_adjoint_and_submultiplicative(T, S):
    assert op_norm(T) == pytest.approx(op_norm(adjoint(T)), rel=1e-12, abs=1e-12)
    assert op_norm(T @ S) <= op_norm(T) * op_norm(S) * (1 + 1e-12) + 1e-12
