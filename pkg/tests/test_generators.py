import numpy as np
import pytest

from buzano_lab.alpha import defect
from buzano_lab.decompositions import Subspace
from buzano_lab.generators import KINDS, SeedSpec, gen
from buzano_lab.linalg import adjoint, identity, min_modulus, op_norm

DIMS = (2, 4, 8)
DRAWS = 300


def _seed(kind, n, i):
    return SeedSpec(2024, kind, (n, i))


def test_determinism():
    for kind in KINDS:
        a = gen(kind, 4, SeedSpec(1, "x", (3,)), **_params(kind))
        b = gen(kind, 4, SeedSpec(1, "x", (3,)), **_params(kind))
        for u, v in zip(np.atleast_1d(a) if kind != "oblique_pair" else a, np.atleast_1d(b) if kind != "oblique_pair" else b):
            assert np.asarray(u).tobytes() == np.asarray(v).tobytes()


def test_streams_differ():
    a = gen("ginibre", 3, SeedSpec(1, "a", (0,)))
    assert not np.array_equal(a, gen("ginibre", 3, SeedSpec(1, "b", (0,))))
    assert not np.array_equal(a, gen("ginibre", 3, SeedSpec(1, "a", (1,))))
    assert not np.array_equal(a, gen("ginibre", 3, SeedSpec(2, "a", (0,))))
    assert SeedSpec(1, "a").child(4, 5) == SeedSpec(1, "a", (4, 5))


def _params(kind):
    return {"member_alpha": {"alpha": 1 + 1j}, "accretive": {"s": 0.7}}.get(kind, {})


def test_examples():
    v = gen("unit_vector", 4, SeedSpec(0))
    assert abs(np.linalg.norm(v) - 1) <= 1e-14
    assert defect(gen("member_alpha", 3, SeedSpec(0), alpha=2), 2) <= 1
    np.testing.assert_array_equal(gen("nilpotent_shift", 3, SeedSpec(0)), [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    ev = np.linalg.eigvalsh(gen("positive_contraction", 5, SeedSpec(0)))
    assert ev.min() >= 0 and ev.max() <= 1


def test_errors():
    with pytest.raises(ValueError):
        gen("nope", 2, SeedSpec(0))
    with pytest.raises(ValueError):
        gen("ginibre", 0, SeedSpec(0))
    with pytest.raises(ValueError):
        gen("member_alpha", 2, SeedSpec(0), alpha=0)
    with pytest.raises(ValueError):
        gen("accretive", 2, SeedSpec(0), s=-1)
    with pytest.raises(ValueError):
        gen("oblique_pair", 1, SeedSpec(0))
    with pytest.raises(ValueError):
        SeedSpec(-1)


@pytest.mark.parametrize("n", DIMS)
def test_class_certification(n):
    I = identity(n)
    for i in range(DRAWS):
        P = gen("psd", n, _seed("psd", n, i))
        assert np.linalg.eigvalsh(P).min() >= -1e-12 * max(1, op_norm(P))
        ev = np.linalg.eigvalsh(gen("positive_contraction", n, _seed("pc", n, i)))
        assert ev.min() >= -1e-12 and ev.max() <= 1 + 1e-12
        U = gen("unitary", n, _seed("u", n, i))
        assert op_norm(adjoint(U) @ U - I) <= 1e-10
        P = gen("orth_proj", n, _seed("p", n, i))
        assert op_norm(P @ P - P) <= 1e-12 and op_norm(P - adjoint(P)) <= 1e-12
        V = gen("partial_isometry", n, _seed("v", n, i))
        assert op_norm(V @ adjoint(V) @ V - V) <= 1e-12
        rho = gen("density_matrix", n, _seed("rho", n, i))
        assert np.linalg.eigvalsh(rho).min() >= -1e-12 and abs(np.trace(rho) - 1) <= 1e-12
        for a in (1, 2, 1 + 1j):
            assert defect(gen("member_alpha", n, _seed("m", n, i), alpha=a), a) <= 1
        s = 0.25 + i / DRAWS
        T = gen("accretive", n, _seed("acc", n, i), s=s)
        assert np.linalg.eigvalsh((T + adjoint(T)) / 2).min() >= s - 1e-12
        M, N = gen("oblique_pair", n, _seed("ob", n, i))
        Subspace(M), Subspace(N)
        assert M.shape[1] + N.shape[1] == n
        assert min_modulus(np.hstack([M, N])) >= 0.05


def test_haar_mean_abs_trace():
    # reference sampler: Mezzadri's recipe written independently of the library
    rng = np.random.default_rng(99)
    ref = []
    for _ in range(10000):
        Z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
        q, r = np.linalg.qr(Z)
        d = np.diagonal(r)
        ref.append(abs(np.trace(q * (d / abs(d)))))
    ours = [abs(np.trace(gen("unitary", 2, SeedSpec(5, "haar", (i,))))) for i in range(10000)]
    assert abs(np.mean(ours) - np.mean(ref)) <= 0.05
    # exact value for U(2): E|tr U| = 8 / (3 pi)
    assert np.mean(ours) == pytest.approx(8 / (3 * np.pi), abs=0.05)
