import numpy as np
import pytest

from squeezelab import hartogs as H, squeeze


@pytest.fixture(scope="module")
def spec():
    return H.hartogs_spec(2, k_max=20)


def test_grid_examples():
    assert np.allclose(H.grid_set(1, 2).points.ravel(), [0.5j, -0.5, -0.5j, 0.5])
    assert len(H.grid_set(1, 3)) == 13
    g = H.grid_set(2, 2)
    assert len(g) == 16 and np.allclose(np.abs(g.points), 0.5)
    with pytest.raises(ValueError):
        H.grid_set(1, 1)


def test_grid_invariants():
    g = H.grid_set(1, 6)
    assert len(g) == H.grid_count(1, 6)
    assert np.allclose(np.abs(g.points[:, 0]), 1 - 1 / g.levels)
    assert len(np.unique(np.round(g.points, 12))) == len(g)


def test_phi_single_term():
    g = H.GridSet(1, 2, np.array([[0.5 + 0j]]), np.array([2]))
    sp = H.HartogsSpec(2, g, np.array([1.0]), 0.0)
    assert H.potential_phi(sp, [[0.0]]).value[0] == pytest.approx(np.log(0.25))
    pot = H.potential_phi(sp, [[0.5]])
    assert pot.neg_inf[0] and np.isneginf(pot.value[0])


def test_V_bounds(spec):
    z = H.sample_base(spec, 10_000, 0)
    v = H.V(spec, z)
    assert np.all((v > 0) & (v < 1))
    assert np.all(H.potential_phi(spec, z).value < 0)


def test_truncation_stability():
    full = H.hartogs_spec(2, k_max=6)
    short = H.hartogs_spec(2, k_max=6, n_terms=10)
    rng = np.random.default_rng(0)
    z = (0.25 * np.sqrt(rng.uniform(0, 1, 1000)) * np.exp(2j * np.pi * rng.uniform(0, 1, 1000)))[:, None]
    diff = np.abs(H.potential_phi(full, z).value - H.potential_phi(short, z).value)
    assert diff.max() <= short.tail


def test_membership(spec):
    m = H.membership(spec, [0.0], 0.3)
    assert m.classification == ("inside" if 0.3 < np.exp(-m.V) else "outside")
    assert H.membership(spec, [0.0], np.exp(-m.V)).classification == "boundary"
    with pytest.raises(ValueError):
        H.membership(spec, [1.2], 0.1)


def test_omega_samples(spec):
    s = H.omega_surface_samples(spec, 500, rng=1)
    assert len(s) == 500
    assert np.any(s[:, 0] == 0)
    assert all(H.membership(spec, p[:1], p[1]).classification == "boundary" for p in s[:50])


def test_psh(spec):
    assert H.psh_scan(spec, count=300).passed
    sp3 = H.hartogs_spec(3, k_max=3)
    assert H.psh_scan(sp3, count=100).passed
    # in two or more base variables log|z - a| has a positive eigenvalue, so flipping signs breaks psh
    assert not H.psh_scan(sp3, count=100, weights=-sp3.weights).passed


def test_separation(spec):
    p = H.omega_point(spec, [0.0], 0.3)
    assert H.locally_separating_check(spec, p).components >= 2
    inner = np.array([0.0, 0.1])
    with pytest.raises(ValueError):
        H.locally_separating_check(spec, inner)
    with pytest.raises(ValueError):
        H.locally_separating_check(spec, H.omega_point(spec, [0.95], 0.0), radius=0.1)


def test_sup_norm_examples():
    r = H.sup_norm_test(lambda P: P[:, 0], 2, 10, 1.0)
    assert r.passed and r.torus_bound == 1 + np.pi * 2 / 10
    assert r.torus_max == pytest.approx(0.9)
    one = H.sup_norm_test(lambda P: np.ones(len(P)), 2, 6, 1.0)
    assert one.passed and one.torus_max == 1.0
    bad = H.sup_norm_test(lambda P: 2 * P[:, 0], 2, 4, 2.0)
    assert not bad.passed and abs(bad.witness[0]) > 0.5


def test_torus_bound_formula_k50():
    r = H.sup_norm_test(lambda P: P[:, 0], 1, 50, 1.0)
    assert r.torus_bound == pytest.approx(1 + np.pi / 50)
    assert r.torus_max == pytest.approx(0.98)


def test_hartogs_upper_monotone(spec):
    om = H.omega_surface_samples(spec, 2000, rng=2)
    target = H.omega_point(spec, [0.1 + 0.05j], 1.0)
    vals = []
    for f in (0.5, 0.8, 0.9, 0.97, 0.995):
        z = np.array([target[0], f * target[1]])
        rep = squeeze.hartogs_upper_bound(spec, z, samples=om)
        d = squeeze.kernels.polydisc_distances(z, target[None, :])[0]
        assert rep.upper < np.tanh(d) + 1e-9
        vals.append(rep.upper)
    assert np.all(np.diff(vals) < 0)
