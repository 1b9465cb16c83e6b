"""Registry of Buzano-type inequalities and identities as evaluable predicates.

Every entry takes an ``Instance`` (named matrices, vectors, scalars and
subspaces) and returns a ``Verdict`` comparing ``lhs`` with ``rhs``. Chained
statements also report each intermediate link, and a verdict holds only
when the main comparison and every link hold.

Numerical radii enter as the value attained by a witness vector, refined to
the maximizing support direction (see ``functionals.numerical_radius``).
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .alpha import unitary_alpha_for_inverse
from .decompositions import Subspace, minimal_angle, oblique_projection
from .functionals import numerical_radius_witness
from .generators import SeedSpec, gen
from .linalg import DEFAULT_TOL, adjoint, identity, is_hermitian, min_modulus, op_norm, rank_tolerance, svd

OMEGA_TOL = 1e-10  # bracket width for numerical radii, relative to max(1, ||T||)
EQ_NORM_BAND = 1e-6  # antecedent band for omega(T) = ||T||


class InequalityId(str, Enum):
    CAUCHY_SCHWARZ = "cauchy_schwarz"
    BUZANO = "buzano"
    ALPHA_BUZANO = "alpha_buzano"
    GEN_BUZANO = "gen_buzano"
    INV_BUZANO = "inv_buzano"
    POSITIVE_BUZANO = "positive_buzano"
    GRAM_BUZANO = "gram_buzano"
    POLAR_BUZANO = "polar_buzano"
    CONTRACTION_MEMBER = "contraction_member"
    CS_REFINED_CONTRACTION = "cs_refined_contraction"
    PROJ_HALF = "proj_half"
    PROJ_CHAIN = "proj_chain"
    PROJ_SHIFT = "proj_shift"
    BUZANO_REFINED = "buzano_refined"
    SUM_PROJ = "sum_proj"
    DUNCAN_TAYLOR = "duncan_taylor"
    OBLIQUE_BUZANO = "oblique_buzano"
    OMEGA_POLAR = "omega_polar"
    OMEGA_POLAR_HALFPOWER = "omega_polar_halfpower"
    OMEGA_EQ_NORM = "omega_eq_norm"
    NORM_MINUS_OMEGA = "norm_minus_omega"
    PRODUCT_BOUND = "product_bound"
    PRODUCT_BOUND_SYM = "product_bound_sym"
    PRODUCT_BOUND_PROJ = "product_bound_proj"
    OMEGA_SQUARE = "omega_square"
    OMEGA_SQUARE_PRINTED = "omega_square_printed"
    OMEGA_EQUIV = "omega_equiv"
    ACCRETIVE_INVERSE = "accretive_inverse"
    ALPHA_STATE = "alpha_state"
    ALPHA_STATE_PRINTED = "alpha_state_printed"

    def __str__(self):
        return self.value


def parse_id(name):
    if isinstance(name, InequalityId):
        return name
    try:
        return InequalityId(str(name).strip().lower())
    except ValueError:
        raise ValueError(f"unknown inequality id {name!r}") from None


class InvalidInstance(ValueError):
    """The instance does not satisfy the schema or hypotheses of the inequality."""


# -- data ------------------------------------------------------------------------------


def _c2j(z):
    return [float(np.real(z)), float(np.imag(z))]


def _arr2j(a):
    return [_c2j(z) for z in np.asarray(a).ravel()]


def _j2arr(data, shape):
    flat = np.array([complex(float(re), float(im)) for re, im in data])
    return flat.reshape(shape)


@dataclass
class Instance:
    matrices: dict = field(default_factory=dict)
    vectors: dict = field(default_factory=dict)
    scalars: dict = field(default_factory=dict)
    subspaces: dict = field(default_factory=dict)
    fingerprint: dict = None

    def copy(self):
        return Instance(
            {k: np.array(v) for k, v in self.matrices.items()},
            {k: np.array(v) for k, v in self.vectors.items()},
            dict(self.scalars),
            {k: Subspace(np.array(v.basis)) for k, v in self.subspaces.items()},
            None if self.fingerprint is None else dict(self.fingerprint),
        )

    def to_json(self):
        return {
            "matrices": {k: {"shape": list(v.shape), "data": _arr2j(v)} for k, v in self.matrices.items()},
            "vectors": {k: _arr2j(v) for k, v in self.vectors.items()},
            "scalars": {k: _c2j(v) for k, v in self.scalars.items()},
            "subspaces": {
                k: {"shape": list(v.basis.shape), "data": _arr2j(v.basis)} for k, v in self.subspaces.items()
            },
            "fingerprint": self.fingerprint,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            {k: _j2arr(v["data"], tuple(v["shape"])) for k, v in obj.get("matrices", {}).items()},
            {k: _j2arr(v, (len(v),)) for k, v in obj.get("vectors", {}).items()},
            {k: complex(v[0], v[1]) for k, v in obj.get("scalars", {}).items()},
            {k: Subspace(_j2arr(v["data"], tuple(v["shape"]))) for k, v in obj.get("subspaces", {}).items()},
            obj.get("fingerprint"),
        )


@dataclass(frozen=True)
class Link:
    label: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    identity: bool = False


@dataclass
class Verdict:
    id: InequalityId
    lhs: float
    rhs: float
    slack: float
    holds: bool
    chain: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    fingerprint: dict = None

    @property
    def ratio(self):
        return self.lhs / self.rhs if self.rhs > 0 else (1.0 if self.lhs <= 0 else math.inf)


def _le(label, lhs, rhs, tol):
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs - lhs
    return Link(label, lhs, rhs, slack, slack >= -tol.allowance(max(abs(lhs), abs(rhs))))


def _eq(label, lhs, rhs, tol, rel=None):
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs - lhs
    allow = tol.allowance(max(abs(lhs), abs(rhs))) if rel is None else rel * max(1.0, abs(lhs), abs(rhs))
    return Link(label, lhs, rhs, slack, abs(slack) <= allow, identity=True)


def _verdict(id_, main, links=(), details=None):
    links = list(links)
    holds = main.holds and all(link.holds for link in links)
    return Verdict(id_, main.lhs, main.rhs, main.slack, holds, links, dict(details or {}))


def _ip(x, y):
    """<x, y> = sum x_i conj(y_i)."""
    return complex(np.vdot(y, x))


def _nrm(x):
    return float(np.linalg.norm(x))


def buzano_bound(abs_xy, nn, alpha):
    """(|<x,y>| + max(1, |alpha - 1|) ||x|| ||y||) / |alpha|, shared by both Buzano forms."""
    return (abs_xy + max(1.0, abs(alpha - 1)) * nn) / abs(alpha)


def _omega(T):
    return numerical_radius_witness(T, OMEGA_TOL)[0]


def _chain(v, r, k, dev_rhs, final_rhs, tol, prefix=""):
    """Links of  |v| <= |v - k r| + |k||r| <= final_rhs  with  |v - k r| <= dev_rhs."""
    dev = abs(v - k * r)
    kr = abs(k) * abs(r)
    return [
        _le(prefix + "deviation", dev, dev_rhs, tol),
        _le(prefix + "triangle", abs(v), dev + kr, tol),
        _le(prefix + "bound", dev + kr, final_rhs, tol),
    ]


# -- hypothesis checks -----------------------------------------------------------------


def _need(inst, matrices=(), vectors=(), scalars=(), subspaces=()):
    for group, names in (
        (inst.matrices, matrices),
        (inst.vectors, vectors),
        (inst.scalars, scalars),
        (inst.subspaces, subspaces),
    ):
        for name in names:
            if name not in group:
                raise InvalidInstance(f"missing slot {name!r}")
    dims = {np.shape(inst.matrices[m])[0] for m in matrices}
    dims |= {np.shape(inst.vectors[v])[0] for v in vectors}
    dims |= {inst.subspaces[s].n for s in subspaces}
    for m in matrices:
        shp = np.shape(inst.matrices[m])
        if len(shp) != 2 or shp[0] != shp[1]:
            raise InvalidInstance(f"matrix {m!r} is not square")
    if len(dims) > 1:
        raise InvalidInstance(f"slot dimensions disagree: {sorted(dims)}")


def _alpha(inst, allow_zero=False):
    a = complex(inst.scalars["alpha"])
    if a == 0 and not allow_zero:
        raise InvalidInstance("alpha must be non-zero")
    return a


def _require_member(T, alpha, tol):
    d = op_norm(alpha * T - identity(T.shape[0]))
    if d > 1 + tol.check_tol:
        raise InvalidInstance(f"T is not in A_alpha (defect {d:.6g})")
    return d


def _require_psd(T, tol, upper=None):
    if not is_hermitian(T, tol.check_tol):
        raise InvalidInstance("matrix is not Hermitian")
    w = np.linalg.eigvalsh((T + adjoint(T)) / 2)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] < -tol.check_tol * scale:
        raise InvalidInstance("matrix is not positive semidefinite")
    if upper is not None and w[-1] > upper + tol.check_tol * scale:
        raise InvalidInstance("matrix exceeds the identity")
    return w


def _require_projection(P, tol, nonzero=False):
    if not is_hermitian(P, tol.check_tol) or np.max(np.abs(P @ P - P)) > tol.check_tol:
        raise InvalidInstance("matrix is not an orthogonal projection")
    if nonzero and np.max(np.abs(P)) == 0.0:
        raise InvalidInstance("projection must be non-zero")


def _require_unit(z, label="z"):
    if abs(_nrm(z) - 1.0) > 1e-10:
        raise InvalidInstance(f"{label} must be a unit vector")


# -- evaluators ------------------------------------------------------------------------


def _ev_cauchy_schwarz(inst, tol):
    _need(inst, vectors=("x", "y"))
    x, y = inst.vectors["x"], inst.vectors["y"]
    return _verdict(InequalityId.CAUCHY_SCHWARZ, _le("main", abs(_ip(x, y)), _nrm(x) * _nrm(y), tol))


def _ev_buzano(inst, tol):
    _need(inst, vectors=("x", "y", "z"))
    x, y, z = inst.vectors["x"], inst.vectors["y"], inst.vectors["z"]
    lhs = abs(_ip(x, z) * _ip(z, y))
    rhs = buzano_bound(abs(_ip(x, y)), _nrm(x) * _nrm(y), 2.0) * _nrm(z) ** 2
    return _verdict(InequalityId.BUZANO, _le("main", lhs, rhs, tol))


def _ev_alpha_buzano(inst, tol):
    # stated for unit z; the ||z||^2 factors extend it homogeneously and are 1 for unit z
    _need(inst, vectors=("x", "y", "z"), scalars=("alpha",))
    x, y, z = inst.vectors["x"], inst.vectors["y"], inst.vectors["z"]
    alpha = _alpha(inst, allow_zero=True)
    b = _ip(x, y)
    nn = _nrm(x) * _nrm(y)
    zz = _nrm(z) ** 2
    pq = _ip(x, z) * _ip(z, y)
    m = max(1.0, abs(alpha - 1))
    raw = _le("raw", abs(alpha * pq - zz * b), m * nn * zz, tol)
    if alpha == 0:
        return _verdict(InequalityId.ALPHA_BUZANO, raw, details={"alpha": [0.0, 0.0]})
    links = [
        raw,
        _le("rearranged", abs(pq - zz * b / alpha), m * nn * zz / abs(alpha), tol),
        _le("triangle", abs(pq), abs(pq - zz * b / alpha) + zz * abs(b) / abs(alpha), tol),
    ]
    main = _le("main", abs(pq), buzano_bound(abs(b), nn, alpha) * zz, tol)
    return _verdict(InequalityId.ALPHA_BUZANO, main, links, {"alpha": _c2j(alpha)})


def _ev_gen_buzano(inst, tol):
    _need(inst, matrices=("T",), vectors=("x", "y"), scalars=("alpha",))
    T, x, y = inst.matrices["T"], inst.vectors["x"], inst.vectors["y"]
    alpha = _alpha(inst)
    d = _require_member(T, alpha, tol)
    b, nn = _ip(x, y), _nrm(x) * _nrm(y)
    v = _ip(T @ x, y)
    final = (abs(b) + nn) / abs(alpha)
    links = _chain(v, b, 1 / alpha, nn / abs(alpha), final, tol)
    return _verdict(InequalityId.GEN_BUZANO, _le("main", abs(v), final, tol), links, {"defect": d})


def _ev_inv_buzano(inst, tol):
    _need(inst, matrices=("T",), vectors=("x", "y"))
    T, x, y = inst.matrices["T"], inst.vectors["x"], inst.vectors["y"]
    if min_modulus(T) <= rank_tolerance(T, tol):
        raise InvalidInstance("T is numerically singular")
    Ustar_adj, alpha = unitary_alpha_for_inverse(T, tol)
    Ustar = adjoint(Ustar_adj)
    Tinv = np.linalg.inv(T)
    nn = _nrm(x) * _nrm(y)
    r = _ip(Ustar @ x, y)
    v = _ip(Tinv @ x, y)
    final = (abs(r) + nn) / abs(alpha)
    d = op_norm(alpha * Tinv - Ustar)
    links = [_le("defect", d, 1.0, tol), _le("alpha_size", abs(alpha), 2.0 / op_norm(Tinv), tol)]
    links += _chain(v, r, 1 / alpha, nn / abs(alpha), final, tol)
    details = {"alpha": _c2j(alpha), "defect": d, "strict": d < 1.0}
    return _verdict(InequalityId.INV_BUZANO, _le("main", abs(v), final, tol), links, details)


def _ev_positive_buzano(inst, tol):
    _need(inst, matrices=("T",), vectors=("x", "y"))
    T, x, y = inst.matrices["T"], inst.vectors["x"], inst.vectors["y"]
    _require_psd(T, tol)
    normT = op_norm(T)
    if normT == 0.0:
        raise InvalidInstance("T must be non-zero")
    k = normT / 2  # 1 / alpha with alpha = 2 / ||T||
    b, nn = _ip(x, y), _nrm(x) * _nrm(y)
    v = _ip(T @ x, y)
    final = k * (abs(b) + nn)
    links = [_le("member", op_norm(T / k - identity(T.shape[0])), 1.0, tol)]
    links += _chain(v, b, k, k * nn, final, tol)
    return _verdict(InequalityId.POSITIVE_BUZANO, _le("main", abs(v), final, tol), links, {"alpha": _c2j(1 / k)})


def _ev_gram_buzano(inst, tol):
    _need(inst, matrices=("T",), vectors=("x", "y"))
    T, x, y = inst.matrices["T"], inst.vectors["x"], inst.vectors["y"]
    normT = op_norm(T)
    if normT == 0.0:
        raise InvalidInstance("T must be non-zero")
    k = normT**2 / 2
    b, nn = _ip(x, y), _nrm(x) * _nrm(y)
    v = _ip(T @ x, T @ y)
    final = k * (abs(b) + nn)
    links = _chain(v, b, k, k * nn, final, tol)
    return _verdict(InequalityId.GRAM_BUZANO, _le("main", abs(v), final, tol), links, {"constant": k})


def _polar_parts(T, tol):
    U, s, W = svd(T)
    keep = s > tol.rank_tol * max(1.0, s[0])
    V = U[:, keep] @ adjoint(W[:, keep])
    return V, s, W


def _ev_polar_buzano(inst, tol):
    _need(inst, matrices=("T",), vectors=("x", "y"))
    T, x, y = inst.matrices["T"], inst.vectors["x"], inst.vectors["y"]
    V, s, W = _polar_parts(T, tol)
    absT = (W * s) @ adjoint(W)
    k = float(s[0]) / 2
    Vy = adjoint(V) @ y
    v = _ip(T @ x, y)
    r = _ip(x, Vy)
    nn = _nrm(x) * _nrm(Vy)
    final = k * (abs(r) + nn)
    links = [_eq("polar_identity", abs(v), abs(_ip(absT @ x, Vy)), tol)]
    links += _chain(v, r, k, k * nn, final, tol)
    return _verdict(InequalityId.POLAR_BUZANO, _le("main", abs(v), final, tol), links)


def _ev_contraction_member(inst, tol):
    _need(inst, matrices=("T",), vectors=("x", "y"))
    T, x, y = inst.matrices["T"], inst.vectors["x"], inst.vectors["y"]
    _require_psd(T, tol, upper=1.0)
    b, nn = _ip(x, y), _nrm(x) * _nrm(y)
    v = _ip(T @ x, y)
    d = op_norm(2 * T - identity(T.shape[0]))
    final = (abs(b) + nn) / 2
    links = [_le("member", d, 1.0, tol)] + _chain(v, b, 0.5, nn / 2, final, tol)
    return _verdict(InequalityId.CONTRACTION_MEMBER, _le("main", abs(v), final, tol), links, {"defect": d})


def _ev_cs_refined(inst, tol):
    _need(inst, matrices=("T",), vectors=("x", "y"))
    T, x, y = inst.matrices["T"], inst.vectors["x"], inst.vectors["y"]
    _require_psd(T, tol, upper=1.0)
    nx, ny = _nrm(x), _nrm(y)
    txx = max(_ip(T @ x, x).real, 0.0)
    tyy = max(_ip(T @ y, y).real, 0.0)
    b = _ip(x, y)
    txy = _ip(T @ x, y)
    s = math.sqrt(txx) * math.sqrt(tyy)
    links = [
        _le("square", (nx * nx - txx) * (ny * ny - tyy), (nx * ny - s) ** 2, tol),
        _le("positive_cs", abs(b - txy) ** 2, (nx * nx - txx) * (ny * ny - tyy), tol),
        _le("root", abs(b - txy), nx * ny - s, tol),
        _le("triangle", abs(b) - abs(txy), abs(b - txy), tol),
    ]
    main = _le("main", abs(b) + s - abs(txy), nx * ny, tol)
    return _verdict(InequalityId.CS_REFINED_CONTRACTION, main, links)


def _proj_terms(inst, tol):
    _need(inst, matrices=("P",), vectors=("x", "y"))
    P, x, y = inst.matrices["P"], inst.vectors["x"], inst.vectors["y"]
    _require_projection(P, tol)
    return _ip(P @ x, y), _ip(x, y), _nrm(x) * _nrm(y)


def _ev_proj_half(inst, tol):
    v, b, nn = _proj_terms(inst, tol)
    return _verdict(InequalityId.PROJ_HALF, _le("main", abs(v - b / 2), nn / 2, tol))


def _ev_proj_chain(inst, tol):
    v, b, nn = _proj_terms(inst, tol)
    final = (abs(b) + nn) / 2
    return _verdict(InequalityId.PROJ_CHAIN, _le("main", abs(v), final, tol), _chain(v, b, 0.5, nn / 2, final, tol))


def _ev_proj_shift(inst, tol):
    v, b, nn = _proj_terms(inst, tol)
    return _verdict(InequalityId.PROJ_SHIFT, _le("main", abs(v - b), (abs(b) + nn) / 2, tol))


def _ev_buzano_refined(inst, tol):
    # unit z; ||z||^2 factors make the statement homogeneous in z
    _need(inst, vectors=("x", "y", "z"))
    x, y, z = inst.vectors["x"], inst.vectors["y"], inst.vectors["z"]
    zz = _nrm(z) ** 2
    v = _ip(x, z) * _ip(z, y)
    b, nn = _ip(x, y), _nrm(x) * _nrm(y)
    final = zz * (abs(b) + nn) / 2
    links = _chain(v, zz * b, 0.5, zz * nn / 2, final, tol)
    return _verdict(InequalityId.BUZANO_REFINED, _le("main", abs(v), final, tol), links)


def _two_projections(inst, tol):
    P1, P2 = inst.matrices["P1"], inst.matrices["P2"]
    _require_projection(P1, tol, nonzero=True)
    _require_projection(P2, tol, nonzero=True)
    return P1, P2


def _ev_sum_proj(inst, tol):
    _need(inst, matrices=("P1", "P2"), vectors=("x", "y"))
    P1, P2 = _two_projections(inst, tol)
    x, y = inst.vectors["x"], inst.vectors["y"]
    k = (1 + op_norm(P1 @ P2)) / 2
    b, nn = _ip(x, y), _nrm(x) * _nrm(y)
    v = _ip((P1 + P2) @ x, y)
    final = k * (abs(b) + nn)
    links = _chain(v, b, k, k * nn, final, tol)
    return _verdict(InequalityId.SUM_PROJ, _le("main", abs(v), final, tol), links, {"constant": k})


def _ev_duncan_taylor(inst, tol):
    _need(inst, matrices=("P1", "P2"))
    P1, P2 = _two_projections(inst, tol)
    main = _eq("main", op_norm(P1 + P2), 1 + op_norm(P1 @ P2), tol)
    return _verdict(InequalityId.DUNCAN_TAYLOR, main)


def _ev_oblique_buzano(inst, tol):
    _need(inst, vectors=("x", "y"), subspaces=("M", "N"))
    M, N = inst.subspaces["M"], inst.subspaces["N"]
    try:
        Q = oblique_projection(M, N, tol)
    except ValueError as exc:
        raise InvalidInstance(str(exc)) from None
    x, y = inst.vectors["x"], inst.vectors["y"]
    theta = minimal_angle(M, N)
    csc = 1 / math.sin(theta)
    cot = 1 / math.tan(theta / 2)
    b, nn = _ip(x, y), _nrm(x) * _nrm(y)
    v = _ip(Q @ x, y)
    final = cot / 2 * (abs(b) + nn)
    links = [
        _eq("norm_Q", op_norm(Q), csc, tol),
        _eq("norm_2Q_minus_I", op_norm(2 * Q - identity(Q.shape[0])), cot, tol),
        _le("cot_at_least_one", 1.0, cot, tol),
    ]
    links += _chain(v, b, 0.5, cot / 2 * nn, cot / 2 * nn + abs(b) / 2, tol)
    links.append(_le("relax", cot / 2 * nn + abs(b) / 2, final, tol))
    details = {"theta0": theta, "csc": csc, "cot_half": cot}
    return _verdict(InequalityId.OBLIQUE_BUZANO, _le("main", abs(v), final, tol), links, details)


def _ev_omega_polar(inst, tol):
    _need(inst, matrices=("T",))
    T = inst.matrices["T"]
    V, s, _ = _polar_parts(T, tol)
    normT = float(s[0])
    wT = _omega(T)
    wV = _omega(V)
    mid = normT / 2 * (1 + wV)
    links = [
        _le("refined_le_norm", normT / 2 * (1 + wV), normT, tol),
        _le("excess", wT - normT / 2, normT / 2 * wV, tol),
    ]
    details = {"omega_T": wT, "omega_V": wV, "norm_T": normT}
    return _verdict(InequalityId.OMEGA_POLAR, _le("main", wT, mid, tol), links, details)


def _ev_omega_polar_halfpower(inst, tol):
    _need(inst, matrices=("T",))
    T = inst.matrices["T"]
    V, s, W = _polar_parts(T, tol)
    normT = float(s[0])
    root = (W * np.sqrt(s)) @ adjoint(W)  # |T|^{1/2}
    wT = _omega(T)
    wH = _omega(V @ root)
    wV = _omega(V)
    first = (normT + math.sqrt(normT) * wH) / 2
    links = [
        _le("half_power_factor", wH, math.sqrt(normT) / 2 * (wV + 1), tol),
        _le("second", (normT + math.sqrt(normT) * wH) / 2, (normT + normT / 2 * (1 + wV)) / 2, tol),
        _le("third", (normT + normT / 2 * (1 + wV)) / 2, normT, tol),
    ]
    details = {"omega_T": wT, "omega_VT_half": wH, "omega_V": wV}
    return _verdict(InequalityId.OMEGA_POLAR_HALFPOWER, _le("main", wT, first, tol), links, details)


def _ev_omega_eq_norm(inst, tol):
    """Conditional: omega(T) = ||T|| (within the band) forces omega(V) = ||V|| = 1.

    From the chain omega(T) <= ||T|| / 2 + ||T|| (1 + omega(V)) / 4, a gap
    ``||T|| - omega(T) <= d`` gives ``omega(V) >= 1 - 4 d / ||T||``, so the
    consequent is checked with that tolerance.
    """
    _need(inst, matrices=("T",))
    T = inst.matrices["T"]
    V, s, _ = _polar_parts(T, tol)
    normT = float(s[0])
    if normT == 0.0:
        raise InvalidInstance("T must be non-zero")
    wT = _omega(T)
    band = EQ_NORM_BAND * max(1.0, normT)
    gap = normT - wT
    details = {"omega_T": wT, "norm_T": normT, "antecedent": gap <= band}
    if gap > band:
        main = Link("main", 0.0, 0.0, 0.0, True)
        details["vacuous"] = True
        return _verdict(InequalityId.OMEGA_EQ_NORM, main, details=details)
    wV = _omega(V)
    normV = op_norm(V)
    allow = 4 * band / normT + tol.check_tol
    deficit = max(1.0 - wV, wV - 1.0, abs(normV - 1.0))
    details.update(omega_V=wV, norm_V=normV, vacuous=False)
    main = Link("main", deficit, allow, allow - deficit, deficit <= allow)
    return _verdict(InequalityId.OMEGA_EQ_NORM, main, details=details)


def _ev_norm_minus_omega(inst, tol):
    _need(inst, matrices=("T",), scalars=("alpha",))
    T = inst.matrices["T"]
    alpha = _alpha(inst)
    _require_member(T, alpha, tol)
    normT = op_norm(T)
    w = _omega(T)
    links = [
        _le("nonnegative", 0.0, normT - w, tol),
        _le("half_norm", normT - w, normT / 2, tol),
        _le("norm_bound", normT / 2, 1 / abs(alpha), tol),
    ]
    main = _le("main", normT - w, 1 / (2 * abs(alpha)), tol)
    return _verdict(InequalityId.NORM_MINUS_OMEGA, main, links, {"omega_T": w, "norm_T": normT})


def _ev_product_bound(inst, tol):
    _need(inst, matrices=("T", "R", "S"), scalars=("alpha",))
    T, R, S = inst.matrices["T"], inst.matrices["R"], inst.matrices["S"]
    alpha = _alpha(inst)
    _require_member(T, alpha, tol)
    lhs = _omega(S @ T @ R)
    w = _omega(S @ R)
    rhs = (op_norm(R) * op_norm(S) + w) / abs(alpha)
    return _verdict(InequalityId.PRODUCT_BOUND, _le("main", lhs, rhs, tol))


def _ev_product_bound_sym(inst, tol):
    _need(inst, matrices=("T", "S"), scalars=("alpha",))
    T, S = inst.matrices["T"], inst.matrices["S"]
    alpha = _alpha(inst)
    _require_member(T, alpha, tol)
    lhs = _omega(S @ T @ S)
    w = _omega(S @ S)
    rhs = (op_norm(S) ** 2 + w) / abs(alpha)
    return _verdict(InequalityId.PRODUCT_BOUND_SYM, _le("main", lhs, rhs, tol))


def _ev_product_bound_proj(inst, tol):
    _need(inst, matrices=("R", "S", "P1", "P2"))
    R, S = inst.matrices["R"], inst.matrices["S"]
    P1, P2 = _two_projections(inst, tol)
    k = (1 + op_norm(P1 @ P2)) / 2
    lhs = _omega(R @ (P1 + P2) @ S)
    w = _omega(R @ S)
    rhs = k * (op_norm(S) * op_norm(R) + w)
    links = [_le("member", op_norm((P1 + P2) / k - identity(R.shape[0])), 1.0, tol)]
    return _verdict(InequalityId.PRODUCT_BOUND_PROJ, _le("main", lhs, rhs, tol), links, {"constant": k})


def _ev_omega_square(inst, tol):
    _need(inst, matrices=("S",))
    S = inst.matrices["S"]
    w = _omega(S)
    w2 = _omega(S @ S)
    normS = op_norm(S)
    links = [_le("power", w2, w**2, tol)]
    main = _le("main", w**2, (normS**2 + w2) / 2, tol)
    return _verdict(InequalityId.OMEGA_SQUARE, main, links, {"omega_S": w, "omega_S2": w2})


def _ev_omega_square_printed(inst, tol):
    _need(inst, matrices=("S",))
    S = inst.matrices["S"]
    w2 = _omega(S @ S)
    main = _le("main", w2, (op_norm(S) ** 2 + w2) / 2, tol)
    return _verdict(InequalityId.OMEGA_SQUARE_PRINTED, main, details={"omega_S2": w2})


def _ev_omega_equiv(inst, tol):
    _need(inst, matrices=("T",))
    T = inst.matrices["T"]
    w = _omega(T)
    normT = op_norm(T)
    links = [_le("lower", normT / 2, w, tol)]
    return _verdict(InequalityId.OMEGA_EQUIV, _le("main", w, normT, tol), links, {"omega_T": w})


def _ev_accretive_inverse(inst, tol):
    _need(inst, matrices=("T",), scalars=("s",))
    T = inst.matrices["T"]
    s = complex(inst.scalars["s"])
    if s.imag != 0 or not s.real > 0:
        raise InvalidInstance("s must be a positive real")
    s = s.real
    lam = float(np.linalg.eigvalsh((T + adjoint(T)) / 2)[0])
    if lam < s - tol.allowance(s):
        raise InvalidInstance("Re(T) >= sI fails")
    if min_modulus(T) <= rank_tolerance(T, tol):
        raise InvalidInstance("T is numerically singular")
    d = op_norm(2 * s * np.linalg.inv(T) - identity(T.shape[0]))
    return _verdict(InequalityId.ACCRETIVE_INVERSE, _le("main", d, 1.0, tol), details={"lambda_min_re": lam})


def _state_terms(inst, tol):
    _need(inst, matrices=("T", "P"), scalars=("alpha",))
    T, P = inst.matrices["T"], inst.matrices["P"]
    alpha = _alpha(inst)
    _require_member(T, alpha, tol)
    _require_psd(P, tol)
    if abs(np.trace(P) - 1) > tol.check_tol:
        raise InvalidInstance("P must have unit trace")
    var = float(np.trace(adjoint(T) @ T @ P).real) - abs(np.trace(T @ P)) ** 2
    dist = op_norm(T - identity(T.shape[0]) / alpha)
    return alpha, var, dist


def _ev_alpha_state(inst, tol):
    """tr(|T|^2 P) - |tr(TP)|^2 <= dist(T, CI)^2 <= 1 / |alpha|^2 for T in A_alpha."""
    alpha, var, dist = _state_terms(inst, tol)
    links = [_le("dist", dist, 1 / abs(alpha), tol), _le("variance", var, dist**2, tol)]
    return _verdict(InequalityId.ALPHA_STATE, _le("main", var, 1 / abs(alpha) ** 2, tol), links, {"variance": var})


def _ev_alpha_state_printed(inst, tol):
    """The same variance against 1 / |alpha|; valid only when |alpha| >= 1."""
    alpha, var, dist = _state_terms(inst, tol)
    details = {"variance": var, "abs_alpha": abs(alpha)}
    return _verdict(InequalityId.ALPHA_STATE_PRINTED, _le("main", var, 1 / abs(alpha), tol), details=details)


# -- samplers --------------------------------------------------------------------------


def _scale(rng):
    return 10.0 ** rng.uniform(-1.0, 1.0)


def _vec(rng, n):
    return gen("ginibre", n, rng)[:, 0] * _scale(rng) if n > 0 else None


def _xy(rng, n):
    return {"x": _vec(rng, n), "y": _vec(rng, n)}


def _pick_alpha(rng, nonzero=True, min_abs=None):
    u = rng.uniform()
    if u < 0.25:
        a = complex((1, 2, 1 + 1j)[int(rng.integers(0, 3))])
    elif not nonzero and u < 0.3:
        a = 0j
    else:
        r = 10.0 ** rng.uniform(-0.7, 0.7)
        a = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
    if min_abs is not None and 0 < abs(a) < min_abs:
        a = a / abs(a) * min_abs * (1 + rng.uniform())
    return complex(a)


def _generic(rng, n):
    """Ginibre, occasionally rank deficient, at a random scale."""
    if n > 1 and rng.uniform() < 0.2:
        k = int(rng.integers(1, n))
        A = gen("ginibre", n, rng)[:, :k]
        B = gen("ginibre", n, rng)[:, :k]
        G = A @ adjoint(B)
    else:
        G = gen("ginibre", n, rng)
    return G * _scale(rng)


def _normal(rng, n):
    U = gen("unitary", n, rng)
    d = gen("ginibre", n, rng)[:, 0]
    return (U * d) @ adjoint(U) * _scale(rng)


def _nonzero_proj(rng, n):
    return gen("orth_proj", n, rng, rank=int(rng.integers(1, n + 1)))


def _sample(id_, n, rng):
    I = InequalityId
    if id_ == I.CAUCHY_SCHWARZ:
        v = _xy(rng, n)
        if rng.uniform() < 0.125:
            v["y"] = v["x"] * complex(*rng.standard_normal(2))
        return Instance(vectors=v)
    if id_ == I.BUZANO:
        return Instance(vectors={**_xy(rng, n), "z": _vec(rng, n)})
    if id_ in (I.ALPHA_BUZANO, I.BUZANO_REFINED):
        inst = Instance(vectors={**_xy(rng, n), "z": gen("unit_vector", n, rng)})
        if id_ == I.ALPHA_BUZANO:
            inst.scalars["alpha"] = _pick_alpha(rng, nonzero=False)
        return inst
    if id_ in (I.GEN_BUZANO, I.NORM_MINUS_OMEGA, I.PRODUCT_BOUND, I.PRODUCT_BOUND_SYM):
        alpha = _pick_alpha(rng)
        inst = Instance(matrices={"T": gen("member_alpha", n, rng, alpha=alpha)}, scalars={"alpha": alpha})
        if id_ == I.GEN_BUZANO:
            inst.vectors = _xy(rng, n)
        if id_ == I.PRODUCT_BOUND:
            inst.matrices["R"] = _generic(rng, n)
        if id_ in (I.PRODUCT_BOUND, I.PRODUCT_BOUND_SYM):
            inst.matrices["S"] = _generic(rng, n)
        return inst
    if id_ in (I.ALPHA_STATE, I.ALPHA_STATE_PRINTED):
        alpha = _pick_alpha(rng, min_abs=1.0 if id_ == I.ALPHA_STATE_PRINTED else None)
        T = gen("member_alpha", n, rng, alpha=alpha)
        return Instance(matrices={"T": T, "P": gen("density_matrix", n, rng)}, scalars={"alpha": alpha})
    if id_ == I.INV_BUZANO:
        return Instance(matrices={"T": gen("ginibre", n, rng) * _scale(rng)}, vectors=_xy(rng, n))
    if id_ == I.POSITIVE_BUZANO:
        T = gen("psd", n, rng, rank=int(rng.integers(1, n + 1))) * _scale(rng)
        return Instance(matrices={"T": T}, vectors=_xy(rng, n))
    if id_ in (I.GRAM_BUZANO, I.POLAR_BUZANO):
        inst = Instance(matrices={"T": _generic(rng, n)}, vectors=_xy(rng, n))
        if id_ == I.GRAM_BUZANO and rng.uniform() < 0.125:
            inst.vectors["y"] = inst.vectors["x"].copy()
        return inst
    if id_ in (I.CONTRACTION_MEMBER, I.CS_REFINED_CONTRACTION):
        return Instance(matrices={"T": gen("positive_contraction", n, rng)}, vectors=_xy(rng, n))
    if id_ in (I.PROJ_HALF, I.PROJ_CHAIN, I.PROJ_SHIFT):
        return Instance(matrices={"P": gen("orth_proj", n, rng)}, vectors=_xy(rng, n))
    if id_ in (I.SUM_PROJ, I.DUNCAN_TAYLOR, I.PRODUCT_BOUND_PROJ):
        inst = Instance(matrices={"P1": _nonzero_proj(rng, n), "P2": _nonzero_proj(rng, n)})
        if id_ == I.SUM_PROJ:
            inst.vectors = _xy(rng, n)
        if id_ == I.PRODUCT_BOUND_PROJ:
            inst.matrices["R"] = _generic(rng, n)
            inst.matrices["S"] = _generic(rng, n)
        return inst
    if id_ == I.OBLIQUE_BUZANO:
        if n < 2:
            raise InvalidInstance("complementary non-trivial subspaces need n >= 2")
        M, N = gen("oblique_pair", n, rng)
        return Instance(vectors=_xy(rng, n), subspaces={"M": Subspace(M), "N": Subspace(N)})
    if id_ in (I.OMEGA_POLAR, I.OMEGA_POLAR_HALFPOWER):
        return Instance(matrices={"T": _generic(rng, n)})
    if id_ == I.OMEGA_EQ_NORM:
        u = rng.uniform()
        if u < 0.4:
            T = _normal(rng, n)
        elif u < 0.6 and n > 1:
            # a normal block carrying the norm plus a small non-normal block
            k = int(rng.integers(1, n))
            T = np.zeros((n, n), dtype=complex)
            N = _normal(rng, k)
            T[:k, :k] = N
            top = op_norm(N)
            B = gen("ginibre", n - k, rng)
            T[k:, k:] = B * (rng.uniform(0.1, 0.9) * top / max(op_norm(B), 1e-300))
        else:
            T = _generic(rng, n)
        return Instance(matrices={"T": T})
    if id_ in (I.OMEGA_SQUARE, I.OMEGA_SQUARE_PRINTED, I.OMEGA_EQUIV):
        u = rng.uniform()
        if u < 0.15:
            S = _normal(rng, n)
        elif u < 0.3 and n > 1:
            k = int(rng.integers(1, n // 2 + 1)) if n > 1 else 1
            # square-zero: range inside the null space
            Q = gen("unitary", n, rng)
            C = gen("ginibre", n, rng)[:k, :k]
            S = Q[:, :k] @ C @ adjoint(Q[:, k : 2 * k]) * _scale(rng)
        else:
            S = _generic(rng, n)
        return Instance(matrices={"S" if id_ != I.OMEGA_EQUIV else "T": S})
    if id_ == I.ACCRETIVE_INVERSE:
        s = 10.0 ** rng.uniform(-1, 1)
        return Instance(matrices={"T": gen("accretive", n, rng, s=s)}, scalars={"s": complex(s)})
    raise ValueError(f"no sampler for {id_}")


# -- registry --------------------------------------------------------------------------


@dataclass(frozen=True)
class Entry:
    id: InequalityId
    kind: str  # "inequality", "identity" or "conditional"
    evaluate: object
    free: tuple = ()  # slots the tightness search may move


_V = ("x", "y")
_VZ = ("x", "y", "z")

REGISTRY = {
    e.id: e
    for e in [
        Entry(InequalityId.CAUCHY_SCHWARZ, "inequality", _ev_cauchy_schwarz, _V),
        Entry(InequalityId.BUZANO, "inequality", _ev_buzano, _VZ),
        Entry(InequalityId.ALPHA_BUZANO, "inequality", _ev_alpha_buzano, _VZ),
        Entry(InequalityId.GEN_BUZANO, "inequality", _ev_gen_buzano, _V),
        Entry(InequalityId.INV_BUZANO, "inequality", _ev_inv_buzano, _V),
        Entry(InequalityId.POSITIVE_BUZANO, "inequality", _ev_positive_buzano, _V),
        Entry(InequalityId.GRAM_BUZANO, "inequality", _ev_gram_buzano, _V),
        Entry(InequalityId.POLAR_BUZANO, "inequality", _ev_polar_buzano, _V),
        Entry(InequalityId.CONTRACTION_MEMBER, "inequality", _ev_contraction_member, _V),
        Entry(InequalityId.CS_REFINED_CONTRACTION, "inequality", _ev_cs_refined, _V),
        Entry(InequalityId.PROJ_HALF, "inequality", _ev_proj_half, _V),
        Entry(InequalityId.PROJ_CHAIN, "inequality", _ev_proj_chain, _V),
        Entry(InequalityId.PROJ_SHIFT, "inequality", _ev_proj_shift, _V),
        Entry(InequalityId.BUZANO_REFINED, "inequality", _ev_buzano_refined, _VZ),
        Entry(InequalityId.SUM_PROJ, "inequality", _ev_sum_proj, _V),
        Entry(InequalityId.DUNCAN_TAYLOR, "identity", _ev_duncan_taylor),
        Entry(InequalityId.OBLIQUE_BUZANO, "inequality", _ev_oblique_buzano, _V),
        Entry(InequalityId.OMEGA_POLAR, "inequality", _ev_omega_polar, ("T",)),
        Entry(InequalityId.OMEGA_POLAR_HALFPOWER, "inequality", _ev_omega_polar_halfpower, ("T",)),
        Entry(InequalityId.OMEGA_EQ_NORM, "conditional", _ev_omega_eq_norm),
        Entry(InequalityId.NORM_MINUS_OMEGA, "inequality", _ev_norm_minus_omega),
        Entry(InequalityId.PRODUCT_BOUND, "inequality", _ev_product_bound, ("R", "S")),
        Entry(InequalityId.PRODUCT_BOUND_SYM, "inequality", _ev_product_bound_sym, ("S",)),
        Entry(InequalityId.PRODUCT_BOUND_PROJ, "inequality", _ev_product_bound_proj, ("R", "S")),
        Entry(InequalityId.OMEGA_SQUARE, "inequality", _ev_omega_square, ("S",)),
        Entry(InequalityId.OMEGA_SQUARE_PRINTED, "inequality", _ev_omega_square_printed, ("S",)),
        Entry(InequalityId.OMEGA_EQUIV, "inequality", _ev_omega_equiv, ("T",)),
        Entry(InequalityId.ACCRETIVE_INVERSE, "inequality", _ev_accretive_inverse),
        Entry(InequalityId.ALPHA_STATE, "inequality", _ev_alpha_state),
        Entry(InequalityId.ALPHA_STATE_PRINTED, "inequality", _ev_alpha_state_printed),
    ]
}

ALL_IDS = tuple(REGISTRY)


def evaluate(id_, inst, tol=DEFAULT_TOL):
    """Evaluate one inequality on one instance.

    Raises:
        InvalidInstance: the instance lacks a slot or violates a hypothesis.
    """
    id_ = parse_id(id_)
    try:
        verdict = REGISTRY[id_].evaluate(inst, tol)
    except np.linalg.LinAlgError as exc:
        raise InvalidInstance(f"linear algebra failure: {exc}") from None
    verdict.fingerprint = inst.fingerprint
    return verdict


def stream(seed, id_, dim, index=0, attempt=0):
    return SeedSpec(int(seed), parse_id(id_).value, (int(dim), int(index), int(attempt)))


def sample_instance(id_, dim, seed, index=0, attempt=0):
    """Draw the instance addressed by ``(seed, id, dim, index, attempt)``."""
    id_ = parse_id(id_)
    rng = stream(seed, id_, dim, index, attempt).rng()
    inst = _sample(id_, int(dim), rng)
    inst.fingerprint = {"seed": int(seed), "id": id_.value, "dim": int(dim), "index": int(index), "attempt": int(attempt)}
    return inst


def instance_from_fingerprint(fp):
    return sample_instance(fp["id"], fp["dim"], fp["seed"], fp.get("index", 0), fp.get("attempt", 0))


# -- tightness search ------------------------------------------------------------------


def _ratio(id_, inst, tol):
    try:
        v = evaluate(id_, inst, tol)
    except InvalidInstance:
        return -math.inf
    if v.rhs <= 1e-300:
        return -math.inf
    return v.lhs / v.rhs


def _normalize(inst, name, is_matrix):
    if is_matrix:
        A = inst.matrices[name]
        f = np.linalg.norm(A)
        if f > 0:
            inst.matrices[name] = A / f
    else:
        x = inst.vectors[name]
        r = np.linalg.norm(x)
        if r > 0:
            inst.vectors[name] = x / r


def _climb(id_, inst, free, tol, budget, target):
    # every real coordinate of every free slot, visited in a fixed order
    coords = []
    for name in free:
        is_matrix = name in inst.matrices
        _normalize(inst, name, is_matrix)
        size = inst.matrices[name].size if is_matrix else inst.vectors[name].size
        for k in range(size):
            for unit in (1.0, 1j):
                coords.append((name, is_matrix, k, unit))
    best = _ratio(id_, inst, tol)
    evals = 1
    step = 0.5
    while step >= 1e-6 and evals < budget and best < target:
        improved = False
        for name, is_matrix, k, unit in coords:
            if evals >= budget or best >= target:
                break
            for sign in (1.0, -1.0):
                trial = inst.copy()
                arr = trial.matrices[name] if is_matrix else trial.vectors[name]
                arr.flat[k] += sign * step * unit
                _normalize(trial, name, is_matrix)
                r = _ratio(id_, trial, tol)
                evals += 1
                if r > best:
                    inst, best, improved = trial, r, True
                    break
        if not improved:
            step /= 2
    return best, inst


def tightness_search(id_, dim, restarts=64, seed=0, tol=DEFAULT_TOL, budget=2000):
    """Hunt for near-equality cases: maximize lhs / rhs by hill-climbing.

    Each restart draws a valid instance, then perturbs the real and
    imaginary parts of the free slots one at a time (vectors and matrices
    renormalized after each move), keeping improvements and halving the step
    from 0.5 down to 1e-6. Returns ``(best_ratio, witness_instance)``.
    """
    id_ = parse_id(id_)
    entry = REGISTRY[id_]
    if entry.kind != "inequality":
        raise ValueError(f"{id_.value} is {'an' if entry.kind == 'identity' else 'a'} {entry.kind}, not an inequality")
    if int(dim) < 2:
        raise ValueError("dim must be at least 2")
    best, witness = -math.inf, None
    target = 1 - 1e-12
    for r in range(int(restarts)):
        inst = None
        for attempt in range(100):
            cand = sample_instance(id_, dim, seed, index=r, attempt=attempt)
            if _ratio(id_, cand, tol) > -math.inf:
                inst = cand
                break
        if inst is None:
            continue
        ratio, inst = _climb(id_, inst, entry.free, tol, budget, target)
        if ratio > best:
            best, witness = ratio, inst
        if best >= target:
            break
    if witness is not None:
        witness.fingerprint = None
        best = _ratio(id_, witness, tol)
    return float(best), witness


def save_instance(path, inst):
    with open(path, "w") as fh:
        json.dump(inst.to_json(), fh)


def load_instance(path):
    with open(path) as fh:
        return Instance.from_json(json.load(fh))
