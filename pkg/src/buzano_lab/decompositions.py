"""Polar decomposition, orthogonal and oblique projections, minimal angles."""

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, adjoint, as_matrix, as_vector, min_modulus, op_norm, svd


class IllConditionedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^n held by an orthonormal basis (columns of ``basis``)."""

    basis: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.basis)
        if B.ndim != 2 or B.shape[1] < 1 or B.shape[1] > B.shape[0]:
            raise ValueError(f"basis must be n x p with 1 <= p <= n, got {B.shape}")
        gram = adjoint(B) @ B
        if np.max(np.abs(gram - np.eye(B.shape[1]))) > DEFAULT_TOL.check_tol:
            raise ValueError("basis columns are not orthonormal")

    @property
    def n(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @classmethod
    def from_vectors(cls, vectors, tol=DEFAULT_TOL):
        """Orthonormalize a spanning set given as columns (or a list of vectors).

        Modified Gram-Schmidt with one re-orthogonalization pass; columns whose
        residual falls below ``tol.rank_tol`` times the largest input norm are
        dropped.
        """
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            cols = [vectors[:, j] for j in range(vectors.shape[1])]
        else:
            cols = [as_vector(v) for v in vectors]
        if not cols:
            raise ValueError("no spanning vectors")
        n = cols[0].shape[0]
        if any(c.shape != (n,) for c in cols):
            raise ValueError("spanning vectors differ in length")
        scale = max(1.0, max(np.linalg.norm(c) for c in cols))
        Q = []
        for c in cols:
            v = np.array(c, dtype=complex)
            for _ in range(2):
                for q in Q:
                    v -= np.vdot(q, v) * q
            r = np.linalg.norm(v)
            if r > tol.rank_tol * scale:
                Q.append(v / r)
        if not Q:
            raise ValueError("spanning vectors are numerically zero")
        return cls(np.column_stack(Q))

    def complement(self):
        """Orthogonal complement, or None when the subspace is everything."""
        if self.dim == self.n:
            return None
        U, _, _ = svd(self.basis)
        return Subspace(U[:, self.dim:])

    def to_json(self):
        return {
            "n": self.n,
            "vectors": [[[float(z.real), float(z.imag)] for z in self.basis[:, j]] for j in range(self.dim)],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            n = int(obj["n"])
            raw = obj["vectors"]
        except (KeyError, TypeError) as exc:
            raise ValueError("subspace object needs 'n' and 'vectors'") from exc
        vecs = []
        for v in raw:
            if len(v) != n:
                raise ValueError(f"vector of length {len(v)} in a space of dimension {n}")
            vecs.append(np.array([complex(float(re), float(im)) for re, im in v]))
        return cls.from_vectors(vecs)


def load_subspace(path):
    with open(path) as fh:
        return Subspace.from_json(json.load(fh))


def save_subspace(path, S):
    with open(path, "w") as fh:
        json.dump(S.to_json(), fh)


@dataclass(frozen=True)
class PolarParts:
    V: np.ndarray  # partial isometry with N(V) = N(T)
    absT: np.ndarray  # |T|


def polar(T, tol=DEFAULT_TOL, unitary=False):
    """T = V |T| with V = U_1 W_1^* over the singular triplets above the rank cutoff.

    That V is the partial isometry with N(V) = N(T). With ``unitary=True`` the
    full ``U W^*`` is returned instead, a unitary that also satisfies T = V |T|.
    """
    T = as_matrix(T)
    U, s, W = svd(T)
    keep = s > tol.rank_tol * max(1.0, s[0])
    if unitary:
        keep[:] = True
    V = U[:, keep] @ adjoint(W[:, keep])
    absT = (W * s) @ adjoint(W)
    return PolarParts(V, absT)


def orth_projection(S):
    return S.basis @ adjoint(S.basis)


def oblique_projection(M, N, tol=DEFAULT_TOL):
    """Q with range M and null space N, from ``Q [M N] = [M 0]``.

    Raises ValueError when the subspaces are not complementary. Emits an
    ``IllConditionedWarning`` when the concatenated basis has minimum modulus
    below 1e-8.
    """
    n = M.n
    if N.n != n:
        raise ValueError("subspaces live in different spaces")
    if M.dim + N.dim != n:
        raise ValueError(f"dimensions {M.dim} + {N.dim} do not add up to {n}")
    B = np.hstack([M.basis, N.basis])
    m = min_modulus(B)
    if m <= tol.rank_tol:
        raise ValueError("subspaces are not complementary (concatenated basis is singular)")
    if m < 1e-8:
        warnings.warn(f"nearly parallel subspaces, min modulus {m:.2e}", IllConditionedWarning, stacklevel=2)
    C = np.hstack([M.basis, np.zeros_like(N.basis)])
    # Q B = C  <=>  B^T Q^T = C^T
    return np.linalg.solve(B.T, C.T).T


def dixmier_cos(S, T):
    """c_0(S, T) = sup |<x, y>| over unit x in S, y in T, i.e. ||P_S P_T||."""
    if S.n != T.n:
        raise ValueError("subspaces live in different spaces")
    return min(1.0, op_norm(adjoint(S.basis) @ T.basis))


def minimal_angle(S, T):
    """theta_0 = arccos c_0, clamped to [1e-12, pi/2]."""
    return min(max(math.acos(dixmier_cos(S, T)), 1e-12), math.pi / 2)
