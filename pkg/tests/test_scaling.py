import numpy as np
import pytest

from squeezelab import boundary, domains, scaling as S
from squeezelab.polyalg import MixedPolynomial as MP


def _model(m):
    return domains.monomial_model(m)


def test_anchor_examples():
    form1, _ = _model(1)
    assert S.anchor_point(form1, (0, -0.25)) == pytest.approx(0)
    form2, _ = _model(2)
    a = S.anchor_point(form2, (0.3, -0.1 + 0.05j))
    assert a.real == pytest.approx(-0.0081, abs=1e-15) and a.imag == 0.05


def test_anchor_no_root():
    form, _ = _model(1)
    with pytest.raises(S.ScalingError):
        S.anchor_point(form, (0.0, -0.5), box=np.array([[-1, -1, -1, -1], [1, 1, -0.6, 1]]))


def test_shear_examples():
    form1, _ = _model(1)
    assert S.shear_A(form1, 0, 0).b == 0
    form2, _ = _model(2)
    sh = S.shear_A(form2, 0.3, -0.0081)
    assert abs(sh.b) == pytest.approx(0.108)


def test_shear_gradient_postcondition(rng):
    # real gradient of the pulled-back form at 0 is parallel to d Re W  [DERIVED: finite differences]
    psi = MP.abs_squared(1, 0, 2) + 0.3 * MP.abs_squared(1, 0) * (MP.variable(1, 0) ** 2 + MP.variable(1, 0, True) ** 2)
    form, _ = domains.canonical_model(2, psi, R2=MP.abs_squared(1, 0, 2) * MP.real_part_of(1, 0))
    for _ in range(20):
        a = (0.3 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)), complex(-0.01, rng.uniform(-0.3, 0.3)))
        ah = S.anchor_point(form, a)
        sh = S.shear_A(form, a[0], ah)
        rho = sh.pullback(form.rho)
        h = 1e-6
        g = [(rho(p).real - rho(-np.array(p)).real) / (2 * h)
             for p in ([h, 0], [1j * h, 0], [0, h], [0, 1j * h])]
        g = np.array(g) / np.linalg.norm(g)
        assert np.allclose(g, [0, 0, 1, 0], atol=1e-8)


def test_normalize_B_examples():
    Z, W = MP.variable(2, 0), MP.variable(2, 1)
    rho = 0.5 * (W + W.conjugate()) + 0.5 * (Z * Z + Z.conjugate() ** 2) + Z * Z.conjugate()
    q, out = S.normalize_B(rho, 1)
    assert out == 0.5 * (W + W.conjugate()) + Z * Z.conjugate()
    assert q == Z * Z
    q0, same = S.normalize_B(out, 1)
    assert q0.is_zero() and same == out


def test_normalize_B_shifted_quartic():
    form, _ = _model(2)
    sh = S.shear_A(form, 0.3, -0.0081)
    rho = sh.pullback(form.rho).truncate(6)
    assert not rho.filter(lambda a, b: a[1] + b[1] == 0 and (a[0] == 0 or b[0] == 0) and 2 <= a[0] + b[0] <= 4).is_zero()
    _, out = S.normalize_B(rho, 2, kappa=sh.kappa)
    for k, s in S.sigma_components(out, 2).items():
        assert s.pluriharmonic_part().is_zero()


@pytest.mark.parametrize("M,expected", [({2: 4, 4: 1}, 0.5), ({4: 1}, 1.0), ({2: 0, 4: 16}, 0.5)])
def test_choose_delta(M, expected):
    d = S.choose_delta(M)
    assert d == pytest.approx(expected)
    assert max(d ** k * v for k, v in M.items()) == pytest.approx(1.0, abs=1e-12)


def test_choose_delta_all_zero():
    with pytest.raises(ValueError):
        S.choose_delta({2: 0, 4: 0})


def test_dilate_normalizes_re_w():
    Z, W = MP.variable(2, 0), MP.variable(2, 1)
    rho = 1.5 * (W + W.conjugate()) + Z * Z.conjugate()
    out = S.dilate_and_normalize(rho, 0.5, 0.25)
    assert out.coefficient((0, 1), (0, 0)) == pytest.approx(0.5)
    assert out.coefficient((1, 0), (1, 0)) == pytest.approx(0.25 / (3 * 0.25))


@pytest.mark.parametrize("m", [1, 2])
def test_normal_approach_exact(m):
    form, _ = _model(m)
    pts = np.array([[0, -2.0 ** -k] for k in range(1, 9)], dtype=complex)
    run = S.run_scaling(form, pts)
    target = MP.real_part_of(2, 1) + MP.abs_squared(2, 0, m)
    assert all(s.rho.max_coefficient_difference(target) < 1e-12 for s in run.steps)
    assert np.allclose(run.diagnostics["blowup"], 1.0, atol=1e-12)
    assert run.converged and run.limit == MP.abs_squared(2, 0, m)
    assert np.allclose(run.diagnostics["C11"], 1.0 if m == 1 else 0.0, atol=1e-14)


def test_paraboloidal_m2_and_m1():
    form2, spec2 = _model(2)
    seq = boundary.paraboloidal_sequence(spec2, np.zeros(2), 1.0, 4.0 ** -np.arange(3, 13))
    run = S.run_scaling(form2, seq)
    assert S.c11_slope(run) >= 1.5
    assert run.diagnostics["C11"][-1] < 1e-3
    b = S.b_bound_check(run)
    assert b.passed and b.trajectory[-1] < b.trajectory[0]
    assert S.blowup_check(run).passed
    assert all(0.1 <= r <= 10 for r in run.diagnostics["eps_over_d"])
    form1, spec1 = _model(1)
    seq1 = boundary.paraboloidal_sequence(spec1, np.zeros(2), 1.0, 4.0 ** -np.arange(3, 13))
    run1 = S.run_scaling(form1, seq1)
    assert np.allclose(run1.diagnostics["C11"], 1.0, atol=1e-9)
    assert not S.b_bound_check(run1).applicable


def test_hausdorff_window():
    form, spec = _model(1)
    win = np.array([[-1, -1, -1, -1], [1, 1, 1, 1]], dtype=float)
    assert S.hausdorff_window_distance(spec, spec, win) == 0
    shifted = form.rho + 0.1
    assert S.hausdorff_window_distance(form.rho, shifted, win) > 0


def test_df_psh_examples():
    siegel = MP.real_part_of(2, 1) + MP.abs_squared(2, 0)
    g = S.df_grid(siegel)
    for d in (0.5, 1.0):
        rep = S.df_psh_check(siegel, d, g)
        assert rep.passed and rep.fd_error < 1e-4
    assert not S.df_psh_check(MP.real_part_of(2, 1) - MP.abs_squared(2, 0), 0.5).passed
    with pytest.raises(ValueError):
        S.df_psh_check(siegel, 0.5, np.array([[0.0, 0.5]]))
