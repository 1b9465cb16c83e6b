"""Dense complex linear algebra on C^n.

Matrices are plain ``numpy`` complex arrays of shape ``(n, n)`` and vectors
are 1-D complex arrays. The inner product is linear in the first slot and
conjugate-linear in the second::

    <x, y> = sum_i x_i * conj(y_i)

so that ``<Tx, y> == <x, T^* y>``. Every other module inherits this
convention.
"""

import json
from dataclasses import dataclass

import numpy as np


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the library.

    ``check_tol`` is applied both absolutely and relative to the magnitude
    of the bound being checked: a comparison ``lhs <= rhs`` passes when
    ``rhs - lhs >= -check_tol * (1 + |rhs|)``.
    """

    eig_tol: float = 1e-13
    rank_tol: float = 1e-10
    opt_tol: float = 1e-12
    check_tol: float = 1e-9

    def __post_init__(self):
        for name in ("eig_tol", "rank_tol", "opt_tol", "check_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value!r}")

    def allowance(self, rhs):
        return self.check_tol * (1.0 + abs(rhs))

    def as_dict(self):
        return {
            "eig_tol": self.eig_tol,
            "rank_tol": self.rank_tol,
            "opt_tol": self.opt_tol,
            "check_tol": self.check_tol,
        }


DEFAULT_TOL = Tolerances()


def as_matrix(data):
    """Coerce ``data`` to a finite square complex matrix (copy)."""
    T = np.array(data, dtype=complex)
    if T.ndim == 0:
        T = T.reshape(1, 1)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {T.shape}")
    if not np.all(np.isfinite(T)):
        raise ValueError("matrix has non-finite entries")
    return T


def as_vector(data):
    x = np.array(data, dtype=complex).ravel()
    if x.size == 0:
        raise ValueError("empty vector")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def identity(n):
    return np.eye(n, dtype=complex)


def adjoint(T):
    return np.conj(np.transpose(T))


def inner(x, y):
    """``<x, y> = sum x_i conj(y_i)``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return complex(np.vdot(y, x))


def norm(x):
    return float(np.linalg.norm(x))


def hermitian_part(T):
    """Re(T) = (T + T^*) / 2."""
    return (T + adjoint(T)) / 2


def skew_part(T):
    """Im(T) = (T - T^*) / 2i, so that T = Re(T) + i Im(T)."""
    return (T - adjoint(T)) / 2j


def is_hermitian(H, tol=DEFAULT_TOL.check_tol):
    H = np.asarray(H)
    scale = max(1.0, float(np.max(np.abs(H))) if H.size else 0.0)
    return bool(np.max(np.abs(H - adjoint(H))) <= tol * scale)


def svd(T):
    """Full singular value decomposition ``T = U @ diag(s) @ W^*``.

    Returns ``(U, s, W)`` with ``s`` non-negative and descending and the
    columns of ``U`` and ``W`` orthonormal.
    """
    U, s, Wh = np.linalg.svd(np.asarray(T, dtype=complex))
    return U, s, adjoint(Wh)


def singular_values(T):
    return np.linalg.svd(np.asarray(T, dtype=complex), compute_uv=False)


def op_norm(T):
    """Operator (spectral) norm: the largest singular value."""
    T = np.asarray(T)
    if T.ndim == 1:
        return norm(T)
    return float(singular_values(T)[0])


def min_modulus(T):
    """m(T) = inf ||Tx|| over unit x, the smallest singular value."""
    return float(singular_values(T)[-1])


def rank_tolerance(T, tol=DEFAULT_TOL):
    return tol.rank_tol * max(1.0, op_norm(T))


def numerical_rank(T, tol=DEFAULT_TOL):
    s = singular_values(T)
    return int(np.sum(s > tol.rank_tol * max(1.0, s[0])))


def trace(T):
    return complex(np.trace(T))


def rank_one(x, y):
    """The operator ``x (x) y : z -> <z, y> x``, entries ``x_i conj(y_j)``."""
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return np.outer(x, np.conj(y))


def _normalize_eigvecs(w, V):
    # descending eigenvalues; each eigenvector's first non-negligible entry real positive
    order = np.argsort(-w, kind="stable")
    w = w[order]
    V = V[:, order].copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        k = int(np.argmax(np.abs(col) > 1e-12 * np.max(np.abs(col))))
        if abs(col[k]) > 0:
            V[:, j] = col * (abs(col[k]) / col[k])
    return w, V


def _jacobi_eigh(H, tol, max_sweeps=64):
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    V = identity(n)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                tau = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # diag(1, conj(phase)) makes A[p, q] real, then a real rotation zeroes it
                G = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = adjoint(G) @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ G
    return np.real(np.diag(A)).copy(), V


def herm_eig(H, tol=DEFAULT_TOL, method="jacobi"):
    """Eigen-decomposition of a Hermitian matrix.

    Args:
        H: Hermitian matrix (checked to ``tol.check_tol``).
        tol: tolerances; the Jacobi sweep stops once the off-diagonal
            Frobenius mass drops below ``tol.eig_tol * ||H||_F``.
        method: ``"jacobi"`` (cyclic complex Jacobi rotations) or
            ``"lapack"`` (``numpy.linalg.eigh``).

    Returns:
        ``(w, V)``: eigenvalues in descending order and the matching
        orthonormal eigenvectors as columns.
    """
    H = as_matrix(H)
    if not is_hermitian(H, tol.check_tol):
        raise PreconditionError("matrix is not Hermitian")
    H = hermitian_part(H)
    if method == "jacobi":
        w, V = _jacobi_eigh(H, tol.eig_tol)
    elif method == "lapack":
        w, V = np.linalg.eigh(H)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _normalize_eigvecs(w, V)


def psd_sqrt(P, tol=DEFAULT_TOL, method="jacobi"):
    """The unique positive square root of a positive semidefinite matrix."""
    w, V = herm_eig(P, tol, method=method)
    floor = -tol.check_tol * max(1.0, float(np.max(np.abs(w))))
    if w[-1] < floor:
        raise PreconditionError(f"matrix has a negative eigenvalue {w[-1]:.3e}")
    r = np.sqrt(np.clip(w, 0.0, None))
    return (V * r) @ adjoint(V)


def abs_op(T):
    """|T| = (T^* T)^{1/2}, assembled from the singular value decomposition."""
    _, s, W = svd(as_matrix(T))
    return (W * s) @ adjoint(W)


def is_psd(T, tol=DEFAULT_TOL.check_tol):
    if not is_hermitian(T, tol):
        return False
    w = np.linalg.eigvalsh(hermitian_part(T))
    return bool(w[0] >= -tol * max(1.0, float(np.max(np.abs(w)))))


# -- matrix file format: {"n": int, "data": [[re, im], ...]} row-major ---------


def matrix_to_json(T):
    T = as_matrix(T)
    n = T.shape[0]
    return {"n": n, "data": [[float(z.real), float(z.imag)] for z in T.ravel()]}


def matrix_from_json(obj):
    try:
        n = int(obj["n"])
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix object needs 'n' and 'data'") from exc
    if n < 1 or len(data) != n * n:
        raise ValueError(f"expected {n * n} entries for n={n}, got {len(data)}")
    flat = np.array([complex(float(re), float(im)) for re, im in data])
    return as_matrix(flat.reshape(n, n))


def load_matrix(path):
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, T):
    with open(path, "w") as fh:
        json.dump(matrix_to_json(T), fh)
