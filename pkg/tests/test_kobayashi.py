import numpy as np
import pytest
from hypothesis import given, strategies as st

from squeezelab import domains, kobayashi as K


def _rand_ball_point(rng, n=2, rmax=0.9):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v) * rmax * rng.uniform() ** 0.5


def test_ball_distance_from_origin():
    # K_B(0, w) = atanh |w|  [TRIVIAL]
    assert K.ball_distance([0, 0], [0.5, 0]) == pytest.approx(np.arctanh(0.5))


def test_ball_distance_unitary_invariance(rng):
    z, w = _rand_ball_point(rng), _rand_ball_point(rng)
    U, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    assert K.ball_distance(U @ z, U @ w) == pytest.approx(K.ball_distance(z, w), rel=1e-12)


def test_ball_distance_moebius_oracle(rng):
    # independent oracle: |phi_z(w)| for the ball automorphism phi_z  [DERIVED]
    for _ in range(10):
        z, w = _rand_ball_point(rng), _rand_ball_point(rng)
        a = z
        s = np.sqrt(1 - np.vdot(a, a).real)
        P = np.outer(a, a.conj()) / np.vdot(a, a).real
        Q = np.eye(2) - P
        phi = (a - P @ w - s * Q @ w) / (1 - np.vdot(a, w))
        assert K.ball_distance(z, w) == pytest.approx(np.arctanh(np.linalg.norm(phi)), rel=1e-10)


def test_polydisc_distance_max_of_factors():
    z, w = np.array([0.2, 0.0]), np.array([0.5, 0.9])
    d1 = np.arctanh(abs((0.2 - 0.5) / (1 - 0.2 * 0.5)))
    d2 = np.arctanh(0.9)
    assert K.polydisc_distance(z, w) == pytest.approx(max(d1, d2))


def test_ball_metric_at_origin():
    assert K.ball_metric([0, 0], [0.3, 0.4j]) == pytest.approx(0.5)


def test_chain_upper_ball_pair():
    ball = domains.unit_ball(2)
    z, w = np.array([0.1, 0.2j]), np.array([-0.3, 0.4])
    r = K.disc_chain_upper(ball, z, w)
    exact = K.ball_distance(z, w)
    assert exact - 1e-9 <= r.upper <= exact + 1e-3


def test_chain_upper_rejects_exterior():
    with pytest.raises(ValueError):
        K.disc_chain_upper(domains.unit_ball(2), [0, 0], [1.2, 0])


def test_distance_to_set_exact_on_ball():
    v, i = K.distance_to_set_upper(domains.unit_ball(2), [0.75, 0], np.array([[0.5, 0], [0, 0.5]]))
    assert i == 0 and np.tanh(v) == pytest.approx(0.4)


def test_sibony_bound_on_ball():
    from squeezelab.polyalg import MixedPolynomial as MP
    u = MP.abs_squared(2, 0) + MP.abs_squared(2, 1) - 1.0
    wit = K.SibonyWitness.from_polynomial(u, c=1.0)
    b = K.sibony_metric_lower([0, 0], [1.0, 0], wit)
    assert b.value == pytest.approx(1.0) and b.conditional_on_alpha
    with pytest.raises(ValueError):
        K.sibony_metric_lower([0, 0], [1.0, 0], K.SibonyWitness.from_polynomial(u, c=2.0))


@given(st.integers(0, 10_000))
def test_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (_rand_ball_point(rng) for _ in range(3))
    assert K.ball_distance(a, c) <= K.ball_distance(a, b) + K.ball_distance(b, c) + 1e-9


@given(st.integers(0, 10_000))
def test_inclusion_monotonicity(seed):
    # B^2 inside D^2 inside B(0, sqrt 2): distances decrease with the domain  [DERIVED]
    rng = np.random.default_rng(seed)
    z, w = _rand_ball_point(rng), _rand_ball_point(rng)
    kb = K.ball_distance(z, w)
    kd = K.polydisc_distance(z, w)
    kr = K.scaled_ball_distance(z, w, np.zeros(2), np.sqrt(2))
    assert kr <= kd + 1e-9 and kd <= kb + 1e-9
