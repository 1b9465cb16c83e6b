"""Seeded random ensembles for every hypothesis class the inequalities need.

Streams are addressed directly by ``(master, label, index)``: the triple is
folded into a ``numpy.random.SeedSequence`` spawn key and drives a Philox
counter-based bit generator, so any stream can be re-derived on its own
without replaying the others.
"""

import zlib
from dataclasses import dataclass

import numpy as np

from .linalg import adjoint, identity, min_modulus

RNG_ALGORITHM = "numpy.random.Philox(SeedSequence(master, spawn_key=(crc32(label), *index)))"


def _label_key(label):
    return zlib.crc32(label.encode("utf-8"))


@dataclass(frozen=True)
class SeedSpec:
    master: int
    label: str = ""
    index: tuple = ()

    def __post_init__(self):
        if not 0 <= int(self.master) < 2**64:
            raise ValueError("master seed must be an unsigned 64-bit integer")
        idx = self.index if isinstance(self.index, tuple) else (self.index,)
        if any(int(i) < 0 for i in idx):
            raise ValueError("stream indices must be non-negative")
        object.__setattr__(self, "index", tuple(int(i) for i in idx))

    def child(self, *index):
        return SeedSpec(self.master, self.label, self.index + tuple(index))

    def rng(self):
        ss = np.random.SeedSequence(int(self.master), spawn_key=(_label_key(self.label),) + self.index)
        return np.random.Generator(np.random.Philox(ss))


def _as_rng(seed):
    if isinstance(seed, SeedSpec):
        return seed.rng()
    if isinstance(seed, np.random.Generator):
        return seed
    return SeedSpec(int(seed)).rng()


def _ginibre(rng, n, m=None):
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def _hermitian(rng, n):
    G = _ginibre(rng, n)
    return (G + adjoint(G)) / 2


def _unitary(rng, n):
    Q, R = np.linalg.qr(_ginibre(rng, n))
    d = np.diag(R)
    ph = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return Q * ph


def _unit(rng, n):
    while True:
        v = _ginibre(rng, n, 1)[:, 0]
        r = np.linalg.norm(v)
        if r > 1e-8:
            return v / r


def _random_basis(rng, n, p):
    Q, _ = np.linalg.qr(_ginibre(rng, n, p))
    return Q


def _contraction(rng, n):
    """Random C with ||C|| <= 1, spread over norms in [0, 1]."""
    G = _ginibre(rng, n)
    s = np.linalg.norm(G, 2)
    return G * (rng.uniform(0.0, 1.0) / s) if s > 0 else G


def _eps_map(w, eps=1e-6):
    lo, hi = float(w.min()), float(w.max())
    if hi - lo < 1e-12:
        return np.full_like(w, 0.5)
    return eps + (1 - 2 * eps) * (w - lo) / (hi - lo)


def gen(kind, n, seed, **params):
    """Draw one object of ensemble ``kind`` in dimension ``n``.

    Kinds: ginibre, hermitian, psd, positive_contraction, unitary, orth_proj,
    oblique_pair, partial_isometry, nilpotent_shift, density_matrix,
    unit_vector, member_alpha (``alpha=``), accretive (``s=``).

    ``orth_proj`` accepts ``rank=``; ``oblique_pair`` accepts ``p=`` and
    returns ``(M, N)`` orthonormal bases. Everything else returns an array.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _as_rng(seed)
    if kind == "ginibre":
        return _ginibre(rng, n)
    if kind == "hermitian":
        return _hermitian(rng, n)
    if kind == "psd":
        G = _ginibre(rng, n, int(params.get("rank", n)))
        return G @ adjoint(G)
    if kind == "positive_contraction":
        U = _unitary(rng, n)
        w = _eps_map(rng.standard_normal(n))
        return (U * w) @ adjoint(U)
    if kind == "unitary":
        return _unitary(rng, n)
    if kind == "orth_proj":
        rank = params.get("rank")
        rank = int(rng.integers(1, n + 1)) if rank is None else int(rank)
        if not 0 <= rank <= n:
            raise ValueError("rank out of range")
        if rank == 0:
            return np.zeros((n, n), dtype=complex)
        Q = _random_basis(rng, n, rank)
        return Q @ adjoint(Q)
    if kind == "oblique_pair":
        if n < 2:
            raise ValueError("oblique_pair needs n >= 2")
        p = params.get("p")
        p = int(rng.integers(1, n)) if p is None else int(p)
        if not 1 <= p < n:
            raise ValueError("p must satisfy 1 <= p < n")
        for _ in range(1000):
            M = _random_basis(rng, n, p)
            N = _random_basis(rng, n, n - p)
            if min_modulus(np.hstack([M, N])) >= 0.05:
                return M, N
        raise RuntimeError("could not draw a well-conditioned complementary pair")
    if kind == "partial_isometry":
        rank = params.get("rank")
        rank = int(rng.integers(1, n + 1)) if rank is None else int(rank)
        A = _random_basis(rng, n, rank)
        B = _random_basis(rng, n, rank)
        return A @ adjoint(B)
    if kind == "nilpotent_shift":
        return np.eye(n, k=-1, dtype=complex)
    if kind == "density_matrix":
        G = _ginibre(rng, n, int(rng.integers(1, n + 1)))
        P = G @ adjoint(G)
        return P / np.trace(P).real
    if kind == "unit_vector":
        return _unit(rng, n)
    if kind == "member_alpha":
        alpha = complex(params.get("alpha", 0))
        if alpha == 0:
            raise ValueError("member_alpha needs a non-zero alpha")
        return (identity(n) + _contraction(rng, n)) / alpha
    if kind == "accretive":
        s = float(params.get("s", 0))
        if not s > 0:
            raise ValueError("accretive needs s > 0")
        G = _ginibre(rng, n)
        R = G @ adjoint(G) * rng.uniform(0.0, 1.0)
        H = _hermitian(rng, n)
        return s * identity(n) + R + 1j * H
    raise ValueError(f"unknown ensemble {kind!r}")


KINDS = (
    "ginibre",
    "hermitian",
    "psd",
    "positive_contraction",
    "unitary",
    "orth_proj",
    "oblique_pair",
    "partial_isometry",
    "nilpotent_shift",
    "density_matrix",
    "unit_vector",
    "member_alpha",
    "accretive",
)
