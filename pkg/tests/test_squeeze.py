import numpy as np
import pytest

from squeezelab import domains, profiles, squeeze as S


@pytest.fixture(scope="module")
def ball():
    return domains.unit_ball(2)


def test_lambda_identity_on_axis_frame():
    fr = S.ExtremalFrame.from_points([0, 0], [[1, 0], [0, 1]])
    lam = S.lambda_map(fr)
    z = np.array([[0.3 - 0.1j, 0.2j]])
    assert np.allclose(lam(z), z)
    assert np.allclose(lam.inverse(lam(z)), z)


def test_frame_ball_off_center(ball):
    fr = S.extremal_frame(ball, [0.5, 0])
    assert np.allclose(fr.radii, [0.5, np.sqrt(0.75)], atol=1e-8)
    assert fr.orthonormality_error() < 1e-10


def test_tangent_coefficients_ball(ball):
    # boundary normal at s_2 = (0.5, sqrt(.75)) pushed through Lambda: rows (1,0) and (.25,.75)/|.|  [DERIVED]
    fr = S.ExtremalFrame.from_points([0.5, 0], [[1, 0], [0.5, np.sqrt(0.75)]])
    tc = S.tangent_coefficients(ball, fr)
    expect = np.array([0.25, 0.75]) / np.hypot(0.25, 0.75)
    assert np.allclose(tc.a[0], [1, 0])
    assert np.allclose(tc.a[1], expect, atol=1e-12)
    assert tc.upper_residual < 1e-12


def test_chain_at_center(ball):
    fr = S.ExtremalFrame.from_points([0, 0], [[1, 0], [0, 1]])
    ch = S.embedding_chain(ball, [0, 0], frame=fr)
    assert np.allclose(ch([[0.5, 0.2]]), [[0.5 / 1.5, 0.2 / 1.8]])
    assert ch.delta0() == pytest.approx(0.5)
    assert ch.diagnostics["acorn_ok"] and ch.diagnostics["key_coeffs_ok"]


def test_chain_detects_escape(ball):
    # interior "boundary" points give planes that cut the domain
    fr = S.ExtremalFrame.from_points([0, 0], [[0.5, 0], [0, 0.5]])
    with pytest.raises(S.ChainVerificationError) as err:
        S.embedding_chain(ball, [0, 0], frame=fr)
    assert err.value.sample is not None


def test_hhr_ball_center(ball):
    # min over the sphere of |(z1/(2-z1), z2/(2-z2))| is 1/3 at (-1, 0); sup is 1 at (1, 0)  [DERIVED: dense sampling oracle]
    lb = S.hhr_lower_bound(ball, [0, 0])
    th = np.linspace(0, np.pi / 2, 401)
    ph = np.linspace(0, 2 * np.pi, 401)
    T, P = np.meshgrid(th, ph)
    z = np.stack([np.cos(T) * np.exp(1j * P), np.sin(T) * np.exp(1j * 0.0)], -1).reshape(-1, 2)
    F = np.linalg.norm(z / (2 - z), axis=1)
    assert lb.inscribed.value == pytest.approx(F.min(), abs=1e-4)
    assert lb.outer_radius == pytest.approx(1.0, abs=1e-9)
    assert 0.33 <= lb.value <= 1.0
    assert lb.apriori == pytest.approx(0.1)


def test_removal_bound_exact(ball):
    K = S.CompactBall(np.zeros(2), 0.5)
    rep = S.removal_upper_bound(ball, K, [0.75, 0])
    assert rep.upper == pytest.approx(0.4, abs=1e-9)
    with pytest.raises(ValueError):
        S.removal_upper_bound(ball, K, [0.2, 0])


def test_bound_report_flags_inversion():
    rep = S.BoundReport(np.zeros(2), lower=0.6, upper=0.5)
    assert any("exceeds" in d for d in rep.diagnostics)


def test_profile_removal_decreasing(ball):
    pts = np.array([[r, 0] for r in (0.9, 0.7, 0.6, 0.52)])
    prof = S.squeeze_profile("removal-upper", pts, domain=ball, K=S.CompactBall(np.zeros(2), 0.5))
    ups = [r.upper for r in prof.reports]
    assert np.all(np.diff(ups) < 0) and prof.slope < 0
    with pytest.raises(ValueError):
        S.squeeze_profile("bogus", pts)


@pytest.mark.slow
def test_biholomorphic_invariance_egg():
    egg = domains.build_egg_domain([0.0, 1.0], profiles.shipped_sigma())
    omega = domains.unshear(egg)
    z = np.array([0.01, -0.99])
    a = S.hhr_lower_bound(egg, z, n_boundary=3000, n_domain=3000)
    b = S.hhr_lower_bound(omega, domains.egg_psi(egg)(z[None, :])[0], n_boundary=3000, n_domain=3000)
    assert a.value == pytest.approx(b.value, abs=1e-8)
