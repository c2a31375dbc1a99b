import numpy as np
import pytest
from hypothesis import given, strategies as st

from squeezelab import polyalg
from squeezelab.polyalg import MixedPolynomial as MP, complex_hessian, compose_affine, subharmonicity_scan

from conftest import fd_complex_hessian, random_real_poly


def test_square_of_real_part_expansion():
    # (z + zbar)^2 = z^2 + 2|z|^2 + zbar^2  [TRIVIAL]
    p = (MP.variable(1, 0) + MP.variable(1, 0, True)) ** 2
    assert p.coefficient((2,), (0,)) == 1
    assert p.coefficient((1,), (1,)) == 2
    assert p.coefficient((0,), (2,)) == 1
    assert len(p) == 3


def test_evaluate_matches_direct_formula(rng):
    p = MP(2, {((2, 0), (0, 1)): 1.5 - 2j, ((0, 0), (1, 1)): 0.25, ((0, 0), (0, 0)): 3.0})
    for z in rng.standard_normal((20, 2)) + 1j * rng.standard_normal((20, 2)):
        direct = (1.5 - 2j) * z[0] ** 2 * np.conj(z[1]) + 0.25 * np.conj(z[0] * z[1]) + 3.0
        assert abs(p(z) - direct) < 1e-12
        assert abs(p.eval_many(z[None, :])[0] - direct) < 1e-12


def test_wirtinger_against_finite_differences(rng):
    p = random_real_poly(rng, 2, 5)
    z = np.array([0.3 - 0.2j, -0.1 + 0.4j])
    h = 1e-6
    for j in range(2):
        e = np.eye(2)[j]
        dx = (p(z + h * e) - p(z - h * e)) / (2 * h)
        dy = (p(z + 1j * h * e) - p(z - 1j * h * e)) / (2 * h)
        assert abs(polyalg.evaluate(p.wirtinger(j), z) - 0.5 * (dx - 1j * dy)) < 1e-7
        assert abs(polyalg.evaluate(p.wirtinger(j, True), z) - 0.5 * (dx + 1j * dy)) < 1e-7


def test_wirtinger_index_out_of_range():
    with pytest.raises(IndexError):
        polyalg.wirtinger_derivative(MP.variable(2, 0), 2)


def test_hessian_of_abs_squared_is_identity():
    # |z1|^2 + |z2|^2 -> identity  [TRIVIAL]
    p = MP.abs_squared(2, 0) + MP.abs_squared(2, 1)
    assert np.allclose(complex_hessian(p, [0.3, 1j]), np.eye(2))


def test_hessian_rejects_non_real():
    with pytest.raises(ValueError):
        complex_hessian(MP.variable(1, 0), [0.1])


def test_hessian_matches_fd(rng):
    for _ in range(10):
        p = random_real_poly(rng, 3, 4)
        z = 0.5 * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
        H = complex_hessian(p, z)
        F = fd_complex_hessian(lambda x: p(x).real, z)
        assert np.abs(H - F).max() <= 1e-6 * max(1.0, np.abs(H).max())


def test_pluriharmonic_and_homogeneous_parts():
    z, zb = MP.variable(1, 0), MP.variable(1, 0, True)
    p = z * z + zb * zb + z * zb + z * z * zb
    ph = polyalg.pluriharmonic_part(p)
    assert ph == z * z + zb * zb
    assert polyalg.homogeneous_component(p, 3) == z * z * zb
    with pytest.raises(ValueError):
        p.homogeneous_component(-1)


def test_compose_affine_pointwise(rng):
    p = random_real_poly(rng, 2, 4)
    M = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    c = np.array([0.2 - 0.1j, 0.3j])
    q = compose_affine(p, M, c)
    x = np.array([0.1 + 0.2j, -0.3 + 0.05j])
    assert abs(q(x) - p(M @ x + c)) < 1e-10


def test_compose_affine_singular():
    with pytest.raises(ValueError):
        compose_affine(MP.variable(2, 0), np.zeros((2, 2)))


@pytest.mark.parametrize("power,expected", [(1, 4.0), (2, 0.0)])
def test_subharmonicity_scan_minima(power, expected):
    # 4 d dbar |z|^2 = 4; 4 d dbar |z|^4 = 16 |z|^2 with minimum 0 at the origin  [DERIVED]
    rep = subharmonicity_scan(MP.abs_squared(1, 0, power))
    assert rep.subharmonic
    assert rep.minimum == pytest.approx(expected, abs=1e-12)


def test_subharmonicity_scan_negative():
    rep = subharmonicity_scan(-MP.abs_squared(1, 0))
    assert not rep.subharmonic and rep.minimum == pytest.approx(-4.0)


def test_records_roundtrip(rng):
    p = random_real_poly(rng, 2, 4)
    assert MP.from_records(2, p.to_records()) == p


@given(st.integers(0, 10_000))
def test_hessian_is_hermitian(seed):
    rng = np.random.default_rng(seed)
    p = random_real_poly(rng, 2, 5)
    z = 0.5 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
    H = complex_hessian(p, z)
    assert np.abs(H - H.conj().T).max() <= 1e-10 * max(1.0, np.abs(H).max())


@given(st.integers(0, 10_000))
def test_leibniz_rule(seed):
    rng = np.random.default_rng(seed)
    p, q = random_real_poly(rng, 2, 3), random_real_poly(rng, 2, 3)
    lhs = (p * q).wirtinger(1)
    rhs = p.wirtinger(1) * q + p * q.wirtinger(1)
    assert lhs.max_coefficient_difference(rhs) <= 1e-10 * max(1.0, lhs.max_abs_coefficient())


@given(st.integers(0, 10_000))
def test_conjugation_is_involution_and_reality(seed):
    rng = np.random.default_rng(seed)
    p = random_real_poly(rng, 2, 4)
    assert p.conjugate().conjugate() == p
    assert p.is_real
