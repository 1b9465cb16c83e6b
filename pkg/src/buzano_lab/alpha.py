"""The sets A_alpha = { T : ||alpha T - I|| <= 1 }."""

from dataclasses import dataclass, field

import numpy as np

from .decompositions import polar
from .functionals import center_of_mass
from .linalg import (
    DEFAULT_TOL,
    PreconditionError,
    as_matrix,
    identity,
    is_hermitian,
    is_psd,
    min_modulus,
    op_norm,
    rank_tolerance,
    svd,
)


@dataclass(frozen=True)
class AlphaCertificate:
    alpha: complex
    defect: float  # ||alpha T - I||
    member: bool
    witness: np.ndarray = None  # unit x with ||(alpha T - I) x|| = defect, set for non-members


@dataclass(frozen=True)
class AlphaRegion:
    """Set of alpha with T in A_alpha, for the structured cases we can describe.

    ``positive_interval``: parameters ``(0, 2 / ||T||)``, real alpha in that half-open interval.
    ``rank_one_disk``: parameters ``(center, radius)``, the disk ``|alpha - center| <= radius``.
    ``generic_unknown``: no parameters.
    """

    kind: str
    parameters: tuple = field(default_factory=tuple)

    def contains(self, alpha):
        # boundary points count as inside up to a relative 1e-12, as membership does
        alpha = complex(alpha)
        if self.kind == "positive_interval":
            lo, hi = self.parameters
            return abs(alpha.imag) <= 1e-12 * hi and lo < alpha.real <= hi * (1 + 1e-12)
        if self.kind == "rank_one_disk":
            center, radius = self.parameters
            return abs(alpha - center) <= radius * (1 + 1e-12)
        raise ValueError("region is unknown for generic operators")


def defect(T, alpha):
    T = as_matrix(T)
    return op_norm(complex(alpha) * T - identity(T.shape[0]))


def membership(T, alpha, tol=DEFAULT_TOL):
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("alpha must be non-zero")
    T = as_matrix(T)
    _, s, W = svd(alpha * T - identity(T.shape[0]))
    d = float(s[0])
    member = d <= 1.0 + tol.check_tol
    return AlphaCertificate(alpha, d, member, None if member else W[:, 0])


def optimal_alpha(T, tol=DEFAULT_TOL):
    """The center of mass c(T); a member scalar whenever m(T) > 0 and c(T) != 0."""
    return center_of_mass(T, tol.opt_tol)


def _rank_one_psd(T, tol):
    """Return ||h||^2 for T = h (x) h, or None."""
    if not is_hermitian(T, tol.check_tol):
        return None
    U, s, _ = svd(T)
    if s[0] == 0.0 or np.any(s[1:] > tol.rank_tol * max(1.0, s[0])):
        return None
    # Hermitian rank one is +-(h (x) h); require the positive sign
    u = U[:, 0]
    if np.vdot(u, T @ u).real <= 0:
        return None
    return float(s[0])


def alpha_region(T, tol=DEFAULT_TOL):
    """Describe the alpha with T in A_alpha for positive or rank-one positive T.

    Rank one is checked before general positivity: every rank-one positive
    operator is positive, and the disk is the larger, exact answer.
    """
    T = as_matrix(T)
    normT = op_norm(T)
    if normT == 0.0:
        return AlphaRegion("generic_unknown")
    hh = _rank_one_psd(T, tol)
    if hh is not None:
        r = 1.0 / hh
        return AlphaRegion("rank_one_disk", (r, r))
    if is_psd(T, tol.check_tol):
        return AlphaRegion("positive_interval", (0.0, 2.0 / normT))
    return AlphaRegion("generic_unknown")


def accretive_inverse_membership(T, s, tol=DEFAULT_TOL):
    """Certify T^{-1} in A_{2s} for T with Re(T) >= sI."""
    T = as_matrix(T)
    if not s > 0:
        raise PreconditionError("s must be positive")
    lam = float(np.linalg.eigvalsh((T + T.conj().T) / 2)[0])
    if lam < s - tol.check_tol * (1 + abs(s)):
        raise PreconditionError(f"Re(T) >= sI fails: lambda_min = {lam:.6g} < s = {s:.6g}")
    if min_modulus(T) <= rank_tolerance(T, tol):
        raise PreconditionError("accretive T is numerically singular; tolerance violated")
    return membership(np.linalg.inv(T), 2 * s, tol)


def unitary_alpha_for_inverse(T, tol=DEFAULT_TOL):
    """Return ``(U, alpha)`` with U unitary and ``||alpha T^{-1} - U^*|| < 1``.

    With the polar form ``T^{-1} = W |T^{-1}|`` (W unitary) take ``U^* = W``
    and ``alpha = 2 / (s_max + s_min)``, which gives the defect
    ``(s_max - s_min) / (s_max + s_min)``.
    """
    T = as_matrix(T)
    if min_modulus(T) <= rank_tolerance(T, tol):
        raise PreconditionError("T is numerically singular")
    Tinv = np.linalg.inv(T)
    W = polar(Tinv, tol).V
    s = np.linalg.svd(Tinv, compute_uv=False)
    alpha = 2.0 / (s[0] + s[-1])
    return W.conj().T, complex(alpha)
