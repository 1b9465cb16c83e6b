"""Scalar functionals of an operator on C^n.

The numerical range W(T) is handled through its support function

    h(phi) = lambda_max(Re(e^{-i phi} T)) = max_{w in W(T)} Re(e^{-i phi} w),

whose top eigenvector ``u`` gives the boundary point ``<Tu, u>``. A set of
angles therefore yields an inner polygon (support points, all inside W(T))
and an outer polygon (supporting lines, containing W(T)). The numerical
radius is bracketed between the largest modulus on each polygon, and the
angles are refined until the bracket closes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    PreconditionError,
    adjoint,
    as_matrix,
    identity,
    min_modulus,
    op_norm,
    rank_tolerance,
    svd,
)


@dataclass(frozen=True)
class GammaResult:
    """Minimizer of ``||A - gamma B||`` over complex ``gamma``."""

    minimizer: complex
    distance: float
    iterations: int
    gap: float = 0.0  # certified upper bound on distance - true minimum


@dataclass(frozen=True)
class RangePoint:
    angle: float
    value: complex  # <T w, w>, an extreme point of W(T) in direction e^{i angle}
    witness: np.ndarray
    support: float  # h(angle)


def _support(T, phis):
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    rot = np.exp(-1j * phis)[:, None, None]
    H = (rot * T + np.conj(rot) * adjoint(T)) / 2
    w, V = np.linalg.eigh(H)
    h = w[:, -1]
    U = V[:, :, -1]
    p = np.einsum("ki,ij,kj->k", np.conj(U), T, U)
    return h, p, U


def support_function(T, phis):
    """h(phi) = lambda_max((e^{-i phi} T + e^{i phi} T^*) / 2) for each angle."""
    return _support(as_matrix(T), phis)[0]


def _outer_bound(phis, h, p):
    """Modulus of the outer-polygon vertex after each support angle (cyclic).

    The vertex is reached from the support point ``p_j`` along its supporting
    line, which avoids the cancellation of the textbook line intersection.
    Below ``_MIN_GAP`` the arc between two support points is bounded by the
    triangle they span instead.
    """
    phi2 = np.append(phis[1:], phis[0] + 2 * np.pi)
    h2 = np.append(h[1:], h[0])
    p2 = np.append(p[1:], p[0])
    delta = phi2 - phis
    rise = np.maximum(h2 - np.real(np.exp(-1j * phi2) * p), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        verts = p + (rise / np.sin(delta)) * (1j * np.exp(1j * phis))
    vmod = np.abs(verts)
    small = delta < _MIN_GAP
    vmod[small] = np.maximum(np.abs(p), np.abs(p2))[small] + np.abs(p2 - p)[small] * delta[small]
    return vmod, delta


_MIN_GAP = 1e-7


def _numerical_radius(T, tol, initial=16, split=6, max_angles=2048):
    scale = op_norm(T)
    if scale == 0.0:
        return 0.0, identity(T.shape[0])[:, 0], 0.0
    phis = np.linspace(0.0, 2 * np.pi, initial, endpoint=False)
    h, p, U = _support(T, phis)
    frac = np.arange(1, split) / split
    while True:
        mod = np.abs(p)
        best = int(np.argmax(mod))
        vmod, delta = _outer_bound(phis, h, p)
        thresh = mod[best] + tol * max(1.0, scale)
        active = np.flatnonzero((vmod > thresh) & (delta >= _MIN_GAP))
        room = (max_angles - phis.size - 1) // (split - 1)
        if active.size == 0 or room < 1:
            break
        # nearly circular ranges keep every gap active; refine the worst first
        if active.size > room:
            active = active[np.argsort(-vmod[active], kind="stable")[:room]]
        new = list((phis[active][:, None] + delta[active][:, None] * frac).ravel())
        # the support direction aligned with the best point is stationary for h
        aligned = math.atan2(p[best].imag, p[best].real) % (2 * np.pi)
        if np.min(np.abs(np.angle(np.exp(1j * (phis - aligned))))) > 1e-15:
            new.append(aligned)
        new = np.mod(np.asarray(new), 2 * np.pi)
        hn, pn, Un = _support(T, new)
        phis = np.concatenate([phis, new])
        h = np.concatenate([h, hn])
        p = np.concatenate([p, pn])
        U = np.concatenate([U, Un])
        order = np.argsort(phis, kind="stable")
        phis, h, p, U = phis[order], h[order], p[order], U[order]
    mod = np.abs(p)
    best = int(np.argmax(mod))
    vmod, _ = _outer_bound(phis, h, p)
    return float(mod[best]), U[best], float(max(np.max(vmod), mod[best]))


def numerical_radius(T, tol=DEFAULT_TOL.opt_tol):
    """omega(T) = sup { |<Tx, x>| : ||x|| = 1 }.

    The returned value is attained by a unit vector (``numerical_radius_witness``),
    so it never exceeds omega(T). Support angles are refined until an outer
    polygon certifies it to ``tol * max(1, ||T||)``; for nearly circular ranges
    the certificate is cut off after ``max_angles`` directions, and the
    reported upper bound is then looser than ``tol``.
    """
    return _numerical_radius(as_matrix(T), tol)[0]


def numerical_radius_witness(T, tol=DEFAULT_TOL.opt_tol):
    """Return ``(omega, x, upper)`` where ``|<Tx, x>| = omega <= omega(T) <= upper``."""
    return _numerical_radius(as_matrix(T), tol)


def range_boundary(T, k):
    """Extreme points of W(T) in ``k`` equally spaced directions."""
    if k < 3:
        raise ValueError("need at least 3 directions")
    T = as_matrix(T)
    phis = 2 * np.pi * np.arange(k) / k
    h, p, U = _support(T, phis)
    return [
        RangePoint(angle=float(phis[j]), value=complex(p[j]), witness=U[j], support=float(h[j]))
        for j in range(k)
    ]


def _top_triplet(M):
    U, s, W = svd(M)
    return s[0], U[:, 0], W[:, 0]


def scalar_nearness(A, B, tol=DEFAULT_TOL.opt_tol, max_iter=2000):
    """Minimize ``||A - gamma B||`` over complex ``gamma``.

    The objective is convex in ``(Re gamma, Im gamma)`` but not smooth where
    the top singular value is multiple, which is the typical situation at the
    minimizer. Coordinate-wise line searches can stall there (``A = diag(1, i)``,
    ``B = I`` stalls at ``gamma = 0``), so a two-dimensional central-cut
    ellipsoid method is used instead. Each step provides the certified bound
    ``f(center) - f* <= sqrt(g^T P g)`` used for stopping.
    """
    A = as_matrix(A)
    B = as_matrix(B)
    normA = op_norm(A)
    normB = op_norm(B)
    if normB == 0.0:
        return GammaResult(0j, normA, 0, 0.0)
    # ||A - gamma B|| >= |gamma| ||B|| - ||A|| > f(0) once |gamma| > 2 ||A|| / ||B||
    radius = 2.0 * normA / normB * (1 + 1e-9) + 1e-300
    cx, cy = 0.0, 0.0
    # ellipsoid {c + F u : |u| <= 1}, shape P = F F^T kept in factored form
    F = [[radius, 0.0], [0.0, radius]]
    a = 2.0 / math.sqrt(3.0)
    b = 2.0 / 3.0 - a
    best_val, best = math.inf, 0j
    gap = math.inf
    thresh = tol * max(1.0, normA)
    it = 0
    for it in range(1, max_iter + 1):
        gamma = complex(cx, cy)
        f, u, v = _top_triplet(A - gamma * B)
        if f < best_val:
            best_val, best = float(f), gamma
        w = np.vdot(u, B @ v)  # u^* B v
        gx, gy = -w.real, w.imag
        # F^T g
        tx = F[0][0] * gx + F[1][0] * gy
        ty = F[0][1] * gx + F[1][1] * gy
        root = math.hypot(tx, ty)
        if root == 0.0:
            gap = 0.0
            break
        gap = min(gap, root + (f - best_val))
        if root <= thresh:
            break
        ex, ey = tx / root, ty / root
        # F xi
        fx = F[0][0] * ex + F[0][1] * ey
        fy = F[1][0] * ex + F[1][1] * ey
        cx -= fx / 3.0
        cy -= fy / 3.0
        F = [
            [a * F[0][0] + b * fx * ex, a * F[0][1] + b * fx * ey],
            [a * F[1][0] + b * fy * ex, a * F[1][1] + b * fy * ey],
        ]
    return GammaResult(best, best_val, it, float(gap))


def center_of_mass(T, tol=DEFAULT_TOL.opt_tol):
    """c(T): the minimizer of ``||gamma T - I||``, with dist(I, CT).

    For ``T = 0`` this returns ``gamma = 0`` and distance 1.
    """
    T = as_matrix(T)
    return scalar_nearness(identity(T.shape[0]), T, tol)


def dist_to_scalars(T, tol=DEFAULT_TOL.opt_tol):
    """dist(T, CI) = min over beta of ``||T - beta I||`` and the minimizing beta."""
    T = as_matrix(T)
    return scalar_nearness(T, identity(T.shape[0]), tol)


def _paul_values(A, T, X):
    AX = A @ X
    TX = T @ X
    c = np.sum(np.conj(TX) * AX, axis=0)  # <Ax, Tx>
    tt = np.sum(np.abs(TX) ** 2, axis=0)
    aa = np.sum(np.abs(AX) ** 2, axis=0)
    return aa - np.abs(c) ** 2 / tt, AX, TX, c, tt


def paul_functional(A, T, restarts=32, seed=0, tol=DEFAULT_TOL, max_iter=4000):
    """M_T(A) = sup_{||x||=1} ( ||Ax||^2 - |<Ax, Tx>|^2 / ||Tx||^2 )^{1/2}.

    Maximized by projected steepest ascent on the unit sphere from ``restarts``
    random starts plus a warm start at the top right singular vector of
    ``A - gamma_0 T`` (``gamma_0`` minimizing ``||A - gamma T||``). All starts
    advance together; each keeps its own step, doubled on success and halved
    on failure, and stops once the tangential gradient falls below 1e-9.

    Raises:
        PreconditionError: if ``T`` is numerically singular.
    """
    A = as_matrix(A)
    T = as_matrix(T)
    if A.shape != T.shape:
        raise ValueError("A and T must have the same shape")
    if min_modulus(T) <= rank_tolerance(T, tol):
        raise PreconditionError("T is numerically singular; M_T(A) needs m(T) > 0")
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, restarts)) + 1j * rng.standard_normal((n, restarts))
    g0 = scalar_nearness(A, T, tol.opt_tol).minimizer
    warm = _top_triplet(A - g0 * T)[2]
    X = np.column_stack([warm, X])
    X /= np.linalg.norm(X, axis=0)
    m = X.shape[1]
    step = np.full(m, 0.5)
    active = np.ones(m, dtype=bool)
    gtol = 1e-9 * max(1.0, op_norm(A) ** 2)
    AhA, ThT, Ah, Th = adjoint(A) @ A, adjoint(T) @ T, adjoint(A), adjoint(T)
    vals, AX, TX, c, tt = _paul_values(A, T, X)
    for _ in range(max_iter):
        if not np.any(active):
            break
        # Wirtinger gradient d(phi)/d(conj x)
        G = AhA @ X - ((np.conj(c) * (Th @ AX) + c * (Ah @ TX)) * tt - np.abs(c) ** 2 * (ThT @ X)) / tt**2
        G -= X * np.real(np.sum(np.conj(X) * G, axis=0))
        gnorm = np.linalg.norm(G, axis=0)
        active &= gnorm > gtol
        if not np.any(active):
            break
        Xn = X + step * G / np.maximum(gnorm, 1e-300)
        Xn /= np.linalg.norm(Xn, axis=0)
        vn, AXn, TXn, cn, ttn = _paul_values(A, T, Xn)
        accept = active & (vn >= vals)
        reject = active & ~accept
        X[:, accept] = Xn[:, accept]
        vals[accept], AX[:, accept], TX[:, accept] = vn[accept], AXn[:, accept], TXn[:, accept]
        c[accept], tt[accept] = cn[accept], ttn[accept]
        step[accept] = np.minimum(step[accept] * 2.0, 1.0)
        step[reject] *= 0.5
        active &= step > 1e-15
    best = max(float(np.max(vals)), 0.0)
    return math.sqrt(best)


def is_bj_orthogonal(B, tol=1e-9):
    """True when I is Birkhoff-James orthogonal to B: ||I + gamma B|| >= 1 for all gamma."""
    return center_of_mass(B).distance >= 1.0 - tol
