"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from squeezelab import boundary, domains, hartogs, kobayashi, profiles, scaling, squeeze
from squeezelab.polyalg import MixedPolynomial as MP, complex_hessian

from conftest import fd_complex_hessian, random_real_poly

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(capsys):
    def _report(k, checks, budget, t0, detail=""):
        elapsed = time.perf_counter() - t0
        ok = all(checks.values()) and elapsed < budget
        failed = [name for name, v in checks.items() if not v]
        if elapsed >= budget:
            failed.append(f"runtime {elapsed:.1f}s >= {budget}s")
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\nACCEPTANCE {k}: {status} ({elapsed:.2f}s) {detail}" + (f" failed={failed}" if failed else ""))
        assert ok, failed
    return _report


def test_01_hessian_oracle(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        p = random_real_poly(rng, n, int(rng.integers(1, 7)))
        z = 0.7 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        H = complex_hessian(p, z)
        F = fd_complex_hessian(lambda x: p(x).real, z)
        worst = max(worst, np.abs(H - F).max() / max(1.0, np.abs(H).max()))
    report(1, {"relative error < 1e-6": worst < 1e-6}, 10, t0, f"worst={worst:.2e}")


def test_02_levi_dichotomy_and_convexifiable(report):
    t0 = time.perf_counter()
    egg = domains.build_egg_domain([0.0, 1.0], profiles.shipped_sigma())
    lev = boundary.levi_dichotomy(domains.unshear(egg))
    conv = boundary.well_convexifiable_check(egg, domains.weak_locus_point(egg))
    report(2, {"grid 10^4": lev.n_points == 10_000, "dichotomy": lev.passed, "convexifiable": conv.passed},
           60, t0, f"tube={lev.zero_set_max_tube:.1e} min_outside={lev.min_outside:.2e}")


def test_03_radial_subharmonicity(report):
    t0 = time.perf_counter()
    r2 = domains.radial_subharmonicity(profiles.power(2))
    r4 = domains.radial_subharmonicity(profiles.power(4))
    neg = domains.radial_subharmonicity(profiles.polynomial([0.0, -1.0]))
    report(3, {"x^2 min 4": r2.subharmonic and abs(r2.minimum - 4) < 1e-9,
               "x^4 min 0+": r4.subharmonic and 0 <= r4.minimum < 1e-9,
               "-x negative": (not neg.subharmonic) and neg.minimum < 0}, 1, t0,
           f"minima=({r2.minimum:.3g}, {r4.minimum:.3g}, {neg.minimum:.3g})")


def test_04_scaling_exactness(report):
    t0 = time.perf_counter()
    checks = {}
    pts = np.array([[0, -2.0 ** -k] for k in range(1, 9)], dtype=complex)
    for m in (1, 2):
        form, _ = domains.monomial_model(m)
        run = scaling.run_scaling(form, pts)
        target = MP.real_part_of(2, 1) + MP.abs_squared(2, 0, m)
        checks[f"m={m} coefficients"] = max(s.rho.max_coefficient_difference(target) for s in run.steps) < 1e-12
        checks[f"m={m} blowup"] = np.allclose(run.diagnostics["blowup"], 1.0, rtol=0, atol=1e-12)
    report(4, checks, 10, t0)


def _parab_run(m):
    form, spec = domains.monomial_model(m)
    seq = boundary.paraboloidal_sequence(spec, np.zeros(2), 1.0, 4.0 ** -np.arange(3, 13))
    return scaling.run_scaling(form, seq)


def test_05_c11_decay(report):
    t0 = time.perf_counter()
    run2, run1 = _parab_run(2), _parab_run(1)
    slope = scaling.c11_slope(run2)
    final = abs(run2.diagnostics["C11"][-1])
    dev1 = np.abs(np.asarray(run1.diagnostics["C11"]) - 1).max()
    report(5, {"10 steps": len(run2.steps) == 10, "slope >= 1.5": slope >= 1.5, "final < 1e-3": final < 1e-3,
               "m=1 stays at 1": dev1 < 1e-9}, 20, t0, f"slope={slope:.3f} final={final:.2e}")


def test_06_b_ratio(report):
    t0 = time.perf_counter()
    chk = scaling.b_bound_check(_parab_run(2))
    tr = np.asarray(chk.trajectory)
    report(6, {"max/median < 100": chk.passed, "tends to 0": tr[-1] < tr[0] and tr[-1] < 0.1 * tr.max()},
           5, t0, f"max/median={tr.max() / np.median(tr):.2f} last={tr[-1]:.2e}")


def test_07_kobayashi(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    ball = domains.unit_ball(2)

    def pt():
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        return v / np.linalg.norm(v) * 0.9 * rng.uniform() ** 0.5

    err = 0.0
    for _ in range(100):
        z, w = pt(), pt()
        err = max(err, abs(kobayashi.disc_chain_upper(ball, z, w).upper - kobayashi.ball_distance(z, w)))
    tri = mono = True
    for _ in range(100):
        a, b, c = pt(), pt(), pt()
        tri &= kobayashi.ball_distance(a, c) <= kobayashi.ball_distance(a, b) + kobayashi.ball_distance(b, c) + 1e-9
        kb, kd = kobayashi.ball_distance(a, b), kobayashi.polydisc_distance(a, b)
        kr = kobayashi.scaled_ball_distance(a, b, np.zeros(2), np.sqrt(2))
        mono &= kr <= kd + 1e-9 and kd <= kb + 1e-9
    report(7, {"chain within 1e-3": err < 1e-3, "triangle": bool(tri), "monotone": bool(mono)}, 120, t0,
           f"max chain error={err:.2e}")


def test_08_removal(report):
    t0 = time.perf_counter()
    ball, K = domains.unit_ball(2), squeeze.CompactBall(np.zeros(2), 0.5)
    at = squeeze.removal_upper_bound(ball, K, [0.75, 0]).upper
    rs = np.array([0.9, 0.8, 0.7, 0.6, 0.55, 0.52, 0.51, 0.505, 0.501, 0.5005])
    prof = squeeze.squeeze_profile("removal-upper", np.column_stack([rs, 0 * rs]), domain=ball, K=K)
    ups = np.array([r.upper for r in prof.reports])
    report(8, {"0.4 at 0.75": abs(at - 0.4) < 1e-6, "monotone": bool(np.all(np.diff(ups) < 0)),
               "final < 1e-3": ups[-1] < 1e-3}, 10, t0, f"value={at:.9f} final={ups[-1]:.2e}")


@pytest.mark.slow
def test_09_hhr(report):
    t0 = time.perf_counter()
    egg = domains.build_egg_domain([0.0, 1.0], profiles.shipped_sigma())
    p = domains.weak_locus_point(egg)
    seq = boundary.paraboloidal_sequence(egg, p, 1.0, 1e-3 * 2.0 ** -np.arange(10))
    vals = np.array([squeeze.hhr_lower_bound(egg, z).value for z in seq.points])
    center = squeeze.hhr_lower_bound(domains.unit_ball(2), [0, 0])
    report(9, {"10 points": len(vals) == 10, "min > 0.01": vals.min() > 0.01, "each <= 1": bool(np.all(vals <= 1)),
               "ball center in [0.33, 1]": 0.33 <= center.numeric <= 1}, 120, t0,
           f"egg min={vals.min():.3f} ball centre={center.numeric:.4f}")


def test_10_hartogs(report):
    t0 = time.perf_counter()
    spec = hartogs.hartogs_spec(2, k_max=20)
    v = hartogs.V(spec, hartogs.sample_base(spec, 10_000, 0))
    psh = hartogs.psh_scan(spec)
    target = hartogs.omega_point(spec, [0.0], np.pi)
    fr = np.array([0.5, 0.8, 0.9, 0.95, 0.98, 0.99, 0.995, 0.999])
    pts = np.array([[target[0], f * target[1]] for f in fr])
    om = hartogs.omega_surface_samples(spec, 4000, rng=0)
    ups = np.array([r.upper for r in squeeze.squeeze_profile("hartogs-upper", pts, spec=spec, samples=om).reports])
    sep = hartogs.locally_separating_check(spec, target)
    report(10, {"0 < V < 1": bool(np.all((v > 0) & (v < 1))), "psh": psh.passed,
                "decreasing": bool(np.all(np.diff(ups) < 0)), "below 0.05": ups[-1] < 0.05,
                "separating": sep.components >= 2}, 120, t0,
           f"upper {ups[0]:.3f} -> {ups[-1]:.2e}, components={sep.components}")


def test_11_sup_norm(report):
    t0 = time.perf_counter()
    n, k = 2, 10
    z1 = hartogs.sup_norm_test(lambda P: P[:, 0], n, k, 1.0)
    one = hartogs.sup_norm_test(lambda P: np.ones(len(P)), n, k, 1.0)
    bad = hartogs.sup_norm_test(lambda P: 2 * P[:, 0], n, k, 1.0)
    exact = 1 + np.pi * n / k
    report(11, {"z1 passes": z1.passed, "1 passes": one.passed,
                "torus bound exact": z1.torus_bound == exact and one.torus_bound == exact,
                "2 z1 witness": (not bad.passed) and bad.witness is not None}, 5, t0)


def test_12_df_exponent(report):
    t0 = time.perf_counter()
    good = MP.real_part_of(2, 1) + MP.abs_squared(2, 0)
    bad = MP.real_part_of(2, 1) - MP.abs_squared(2, 0)
    grid = scaling.df_grid(good, 1000, -0.1)
    passes = [scaling.df_psh_check(good, d, grid).passed for d in (0.5, 1.0)]
    fails = not scaling.df_psh_check(bad, 0.5, scaling.df_grid(bad, 1000, -0.1)).passed
    report(12, {"10^3 grid": len(grid) == 1000, "passes on Re W + |Z|^2": all(passes),
                "fails on Re W - |Z|^2": fails}, 10, t0)
