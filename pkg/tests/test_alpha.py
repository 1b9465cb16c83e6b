import numpy as np
import pytest

from buzano_lab.alpha import (
    AlphaRegion,
    accretive_inverse_membership,
    alpha_region,
    defect,
    membership,
    optimal_alpha,
    unitary_alpha_for_inverse,
)
from buzano_lab.functionals import range_boundary
from buzano_lab.generators import SeedSpec, gen
from buzano_lab.linalg import PreconditionError, adjoint, identity, min_modulus, op_norm

N2 = np.array([[0, 1], [0, 0]], dtype=complex)


def test_defect_examples():
    assert defect(identity(3), 1) == pytest.approx(0)
    assert defect(np.diag([1.0, 0.5]), 2) == pytest.approx(1)
    for a in (1, 2, 1 + 1j, -0.3j):
        assert defect(2 / (3 * a) * identity(2), a) == pytest.approx(1 / 3)


def test_membership_examples():
    c = membership(0.5 * identity(2), 2)
    assert c.member and c.defect == pytest.approx(0) and c.witness is None
    c = membership(N2, 1)
    # singular values of N - I are the roots of s^2 = (3 +- sqrt 5) / 2
    assert c.defect == pytest.approx(np.sqrt((3 + np.sqrt(5)) / 2))
    assert not c.member
    w = c.witness
    assert np.linalg.norm(w) == pytest.approx(1)
    assert np.linalg.norm(N2 @ w - w) == pytest.approx(c.defect, abs=1e-9)
    T = gen("positive_contraction", 4, SeedSpec(1))
    assert membership(T, 2).member
    with pytest.raises(ValueError):
        membership(N2, 0)


def test_membership_boundary_is_member():
    c = membership(np.diag([1.0, 0.0]) * (1 + 1e-12), 2)
    assert c.member and c.defect > 1


def test_optimal_alpha_examples():
    r = optimal_alpha(np.diag([1.0, 3.0]))
    assert r.minimizer == pytest.approx(0.5, abs=1e-9) and r.distance == pytest.approx(0.5, abs=1e-9)
    assert membership(np.diag([1.0, 3.0]), r.minimizer).member
    r = optimal_alpha(identity(2))
    assert r.minimizer == pytest.approx(1, abs=1e-9) and r.distance == pytest.approx(0, abs=1e-9)
    r = optimal_alpha(N2)
    assert abs(r.minimizer) < 1e-9 and r.distance == pytest.approx(1, abs=1e-9)


def _zero_in_range(T):
    # 0 in W(T) iff no support value is negative
    return all(p.support >= -1e-9 for p in range_boundary(T, 720))


def test_optimal_alpha_is_member_when_invertible():
    for i in range(100):
        T = gen("ginibre", 2 + i % 5, SeedSpec(5, "opt", (i,)))
        r = optimal_alpha(T)
        assert min_modulus(T) > 0 and r.distance <= 1
        if abs(r.minimizer) > 1e-9:
            assert membership(T, r.minimizer).member
        else:
            # 0 in W(T): no scalar improves on gamma = 0
            assert r.distance >= 1 - 1e-9
            assert _zero_in_range(T)


def test_region_examples():
    reg = alpha_region(np.diag([2.0, 1.0]))
    assert reg.kind == "positive_interval"
    assert reg.parameters == pytest.approx((0, 1))
    reg = alpha_region(np.outer([np.sqrt(2), 0], [np.sqrt(2), 0]))
    assert reg.kind == "rank_one_disk"
    assert reg.parameters == pytest.approx((0.5, 0.5), abs=1e-15)
    for a in (1.0, 0.5 + 0.5j, 0.5 - 0.5j, 0.02):
        assert reg.contains(a) and membership(np.outer([np.sqrt(2), 0], [np.sqrt(2), 0]), a).member
    assert alpha_region(N2).kind == "generic_unknown"
    assert alpha_region(-np.diag([2.0, 1.0])).kind == "generic_unknown"
    assert alpha_region(np.zeros((2, 2))).kind == "generic_unknown"
    with pytest.raises(ValueError):
        AlphaRegion("generic_unknown").contains(1)


def _probe(T, reg, rng, margin=1e-6):
    if reg.kind == "positive_interval":
        lo, hi = reg.parameters
        inside = rng.uniform(lo, hi, 200)
        inside = np.append(inside, hi)
        outside = np.append(rng.uniform(hi + margin, 3 * hi, 100), -rng.uniform(margin, hi, 100))
    else:
        c, r = reg.parameters
        ang = rng.uniform(0, 2 * np.pi, 200)
        inside = c + r * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(1j * ang)
        # boundary circle, including the real and imaginary extremes
        inside = np.concatenate([inside, c + r * np.exp(1j * ang[:50]), [c + r, c + 1j * r, c - 1j * r]])
        outside = c + (r + margin + rng.uniform(0, r, 200)) * np.exp(1j * ang)
    for a in inside:
        assert reg.contains(a) and membership(T, a).member
    for a in outside:
        assert not reg.contains(a) and not membership(T, a).member


def test_region_sampling_oracle(rng):
    for i in range(20):
        n = 2 + i % 4
        P = gen("psd", n, SeedSpec(7, "reg", (i,)))
        reg = alpha_region(P)
        assert reg.kind == "positive_interval"
        _probe(P, reg, rng)
        h = gen("ginibre", n, SeedSpec(7, "h", (i,)))[:, 0]
        H = np.outer(h, h.conj())
        reg = alpha_region(H)
        assert reg.kind == "rank_one_disk"
        _probe(H, reg, rng)


def test_accretive_inverse_examples():
    c = accretive_inverse_membership(identity(2), 1)
    assert c.member and c.defect == pytest.approx(1)
    assert accretive_inverse_membership(np.diag([1, 2 + 1j]), 1).member
    with pytest.raises(PreconditionError):
        accretive_inverse_membership(np.diag([0.5, 2.0]), 1)
    with pytest.raises(PreconditionError):
        accretive_inverse_membership(identity(2), 0)
    for i in range(100):
        s = 10 ** np.random.default_rng(i).uniform(-1, 1)
        T = gen("accretive", 2 + i % 6, SeedSpec(9, "acc", (i,)), s=s)
        assert accretive_inverse_membership(T, s).member


def test_unitary_alpha_examples():
    U, a = unitary_alpha_for_inverse(identity(2))
    np.testing.assert_allclose(U, identity(2), atol=1e-14)
    assert a == pytest.approx(1)
    T = np.diag([1.0, 1 / 3])
    U, a = unitary_alpha_for_inverse(T)
    assert a == pytest.approx(0.5)
    assert op_norm(a * np.linalg.inv(T) - adjoint(U)) == pytest.approx(0.5)
    with pytest.raises(PreconditionError):
        unitary_alpha_for_inverse(N2)


def test_unitary_alpha_random():
    for i in range(200):
        n = 2 + i % 7
        T = gen("ginibre", n, SeedSpec(13, "inv", (i,)))
        U, a = unitary_alpha_for_inverse(T)
        Ti = np.linalg.inv(T)
        assert np.linalg.norm(adjoint(U) @ U - identity(n)) < 1e-10
        assert op_norm(a * Ti - adjoint(U)) < 1
        assert abs(a) <= 2 / op_norm(Ti) * (1 + 1e-12)


# structural properties of A_alpha on generated members

ALPHAS = (1, 2, 1 + 1j, 0.5j)


def _members(alpha, n, count, label):
    return [gen("member_alpha", n, SeedSpec(17, label, (n, i)), alpha=alpha) for i in range(count)]


@pytest.mark.parametrize("alpha", ALPHAS)
def test_member_properties(alpha, rng):
    for n in (2, 4, 8):
        Ts = _members(alpha, n, 60, f"m{alpha}")
        Ss = _members(alpha, n, 60, f"s{alpha}")
        for T, S in zip(Ts, Ss):
            assert defect(T, alpha) <= 1
            lam = rng.uniform()
            assert defect(lam * T + (1 - lam) * S, alpha) <= 1 + 1e-9
            assert op_norm(T) <= 2 / abs(alpha) + 1e-9
            assert membership(adjoint(T), np.conj(alpha)).member
            assert membership(T + S, alpha / 2).member
            if defect(T, alpha) < 1 - 1e-9:
                assert min_modulus(T) > 0


def test_adjoint_membership_both_ways():
    for i in range(50):
        T = gen("ginibre", 3, SeedSpec(19, "adj", (i,)))
        a = complex(*np.random.default_rng(i).standard_normal(2))
        assert membership(T, a).member == membership(adjoint(T), np.conj(a)).member


def test_selfadjoint_members_are_semidefinite():
    for i in range(200):
        n = 2 + i % 6
        a = [1, 2, -1, -0.5][i % 4]
        H = gen("hermitian", n, SeedSpec(23, "sa", (i,)))
        # symmetric contraction keeps (I + C)/a self-adjoint
        H *= np.random.default_rng(i).uniform() / op_norm(H)
        T = (identity(n) + H) / a
        assert membership(T, a).member
        ev = np.linalg.eigvalsh(T)
        assert np.all(ev >= -1e-9) or np.all(ev <= 1e-9)
