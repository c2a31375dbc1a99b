import numpy as np
import pytest
from hypothesis import given, strategies as st

from squeezelab import boundary as B, domains, profiles


def test_project_ball():
    pr = B.project_to_boundary(domains.unit_ball(2), [0.5, 0])
    assert np.allclose(pr.point.point, [1, 0], atol=1e-9)
    assert pr.distance == pytest.approx(0.5, abs=1e-9)
    assert pr.kkt_residual < 1e-8


def test_project_siegel_flat():
    form, spec = domains.monomial_model(1)
    pr = B.project_to_boundary(spec, [0, -1e-3])
    assert np.allclose(pr.point.point, [0, 0], atol=1e-9)
    assert pr.distance == pytest.approx(1e-3, rel=1e-6)


def test_tangent_normal_invariant_under_rescaling():
    ball = domains.unit_ball(2)
    q = np.array([0.6, 0.8j])
    scaled = domains.DomainSpec(2, ball.defining.scaled(2.0), ball.box, "b2", ball.witness, kind="custom",
                                boundary_sampler=ball.boundary_sampler)
    assert np.abs(B.tangent_plane(ball, q).normal - B.tangent_plane(scaled, q).normal).max() < 1e-10


def test_levi_ball_is_one():
    ball = domains.unit_ball(3)
    rep = B.levi_classify(ball, np.array([0.6, 0.0, 0.8j]))
    assert np.allclose(rep.eigenvalues, 1.0)
    assert rep.classification == "strongly-psc"


def test_levi_egg_weak_at_weak_point():
    omega = domains.unshear(domains.build_egg_domain([0.0, 1.0], profiles.shipped_sigma()))
    assert B.levi_classify(omega, np.array([0.0, -1.0])).classification == "weakly-psc"


def test_strict_support_ball():
    rep = B.strict_support_check(domains.unit_ball(2), np.array([1.0, 0.0]))
    assert rep.passed and rep.worst_offset < 0


def test_paraboloidal_sequence_ball():
    ball = domains.unit_ball(2)
    seq = B.paraboloidal_sequence(ball, np.array([1.0, 0.0]), 1.0, [0.1 * 2.0 ** -k for k in range(6)])
    assert len(seq) == 6
    val = B.validate_paraboloidal(seq)
    assert val.passed and val.min_C <= 1.0 + 1e-6
    assert np.all(np.diff(seq.distances) < 0)


def test_paraboloidal_rejects_bad_schedule():
    ball = domains.unit_ball(2)
    with pytest.raises(ValueError):
        B.paraboloidal_sequence(ball, np.array([1.0, 0.0]), 1.0, [0.1, 0.2])
    with pytest.raises(ValueError):
        B.paraboloidal_sequence(ball, np.array([1.0, 0.0]), -1.0, [0.1])


@given(st.floats(0.05, 0.9), st.floats(0, 2 * np.pi))
def test_projection_distance_is_ball_gap(r, th):
    # nearest boundary point of the ball lies on the ray; distance 1 - |z|  [DERIVED]
    z = r * np.array([np.cos(th), 1j * np.sin(th)])
    pr = B.project_to_boundary(domains.unit_ball(2), z)
    assert pr.distance == pytest.approx(1 - r, abs=1e-8)
