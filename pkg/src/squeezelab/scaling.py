"""Rescaling pipeline along approach sequences on canonical-form domains.

Each step anchors the sequence point on the boundary, shears so the
tangent plane becomes ``Re W = 0``, absorbs pluriharmonic terms into ``W``,
and dilates anisotropically so that the rescaled defining function reads
``Re W + P(Z) + ...`` with normalized coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .boundary import ApproachSequence
from .domains import CanonicalBoundaryForm, DomainSpec, PolynomialDefiningFunction
from .polyalg import MixedPolynomial, complex_hessian

CAUCHY_TOL = 1e-6
ANCHOR_TOL = 1e-12


class ScalingError(RuntimeError):
    """A pipeline step failed; ``index`` is the step number."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"step {index}: {message}")
        self.index = index


def _z_only(key) -> bool:
    a, b = key
    return a[1] == 0 and b[1] == 0


def _harmonic(key) -> bool:
    a, b = key
    return a[0] == 0 or b[0] == 0


def sigma_components(rho: MixedPolynomial, m: int) -> dict[int, MixedPolynomial]:
    """Pure-``Z`` homogeneous components ``sigma_k`` for ``k = 2..2m``."""
    pure = rho.filter(lambda a, b: _z_only((a, b)))
    return {k: pure.homogeneous_component(k) for k in range(2, 2 * m + 1)}


# ---------------------------------------------------------------------------
# single-step operations


def anchor_point(form: CanonicalBoundaryForm, a, box=None) -> complex:
    """Boundary point ``a_hat_2`` with ``Im a_hat_2 = Im a_2`` above ``a_1``.

    Raises
    ------
    ScalingError
        If no root lies in the box or the residual stays above ``1e-12``.
    """
    a1, a2 = complex(a[0]), complex(a[1])
    lo, hi = (-1.0, 1.0) if box is None else (float(box[0, 2]), float(box[1, 2]))
    rho = form.rho

    def f(x):
        return rho((a1, complex(x, a2.imag))).real

    def df(x):
        return 2.0 * rho.complex_gradient((a1, complex(x, a2.imag)))[1].real

    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise ScalingError("no boundary root in the clipping box")
    x = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    for _ in range(4):
        d = df(x)
        if d == 0:
            break
        step = f(x) / d
        x_new = x - step
        if not lo <= x_new <= hi:
            break
        x = x_new
        if abs(step) < 1e-17:
            break
    if abs(f(x)) > ANCHOR_TOL:
        raise ScalingError(f"anchor residual {abs(f(x)):.3e} exceeds {ANCHOR_TOL}")
    return complex(x, a2.imag)


@dataclass(frozen=True)
class Shear:
    """``(z, w) -> (z - a1, c^{-1} (w - a_hat_2 - b (z - a1)))`` with ``|c| = 1``.

    ``c`` rotates ``W`` so that its coefficient in the pulled-back form is
    real and positive; ``c = 1`` whenever the ``w``-derivative is real.
    """

    a1: complex
    a2_hat: complex
    b: complex
    c: complex
    kappa: float

    def pullback(self, rho: MixedPolynomial) -> MixedPolynomial:
        Z = MixedPolynomial.variable(2, 0)
        W = MixedPolynomial.variable(2, 1)
        return rho.substitute([Z + self.a1, W * self.c + Z * self.b + self.a2_hat])


def shear_A(form: CanonicalBoundaryForm | MixedPolynomial, a1, a2_hat) -> Shear:
    """Shear making the real differential at 0 a positive multiple of ``d Re W``.

    Raises
    ------
    ScalingError
        If the ``w``-derivative vanishes at the anchored point.
    """
    rho = form.rho if isinstance(form, CanonicalBoundaryForm) else form
    g = rho.complex_gradient((complex(a1), complex(a2_hat)))
    if abs(g[1]) < 1e-14:
        raise ScalingError("d rho / d w vanishes at the anchored point")
    b = -g[0] / g[1]
    c = np.conj(g[1]) / abs(g[1])
    return Shear(complex(a1), complex(a2_hat), complex(b), complex(c), float(abs(g[1])))


def normalize_B(rho: MixedPolynomial, m: int, kappa: float | None = None,
                degree: int | None = None, max_rounds: int = 16) -> tuple[MixedPolynomial, MixedPolynomial]:
    """Absorb pluriharmonic pure-``Z`` terms of degrees ``2..2m`` into ``W``.

    Substitutes ``W -> W - q(Z)`` until those terms vanish exactly.

    Returns
    -------
    q : MixedPolynomial
        Holomorphic polynomial in ``Z`` (two-variable container) defining
        ``B(Z, W) = (Z, W + q(Z))``.
    rho : MixedPolynomial
        The normalized form.
    """
    if kappa is None:
        kappa = rho.coefficient((0, 1), (0, 0)).real
    if kappa <= 0:
        raise ScalingError("W coefficient must be positive before normalization")
    Z = MixedPolynomial.variable(2, 0)
    W = MixedPolynomial.variable(2, 1)
    q_total = MixedPolynomial.zero(2)
    def target(a, b):
        return _z_only((a, b)) and _harmonic((a, b)) and 2 <= a[0] + b[0] <= 2 * m

    for _ in range(max_rounds):
        h = {(a, b): c for (a, b), c in rho if target(a, b) and b[0] == 0}
        scale = max(1.0, rho.max_abs_coefficient())
        if not h or max(abs(c) for c in h.values()) <= 1e-13 * scale:
            break
        # rho contains kappa (W + W-bar); W -> W - q removes 2 Re(kappa q)
        q = MixedPolynomial(2, {k: v / kappa for k, v in h.items()}, prune=False)
        rho = rho.substitute([Z, W - q])
        if degree is not None:
            rho = rho.truncate(degree)
        q_total = q_total + q
    else:
        raise ScalingError("pluriharmonic absorption did not terminate")
    # what remains of the targeted terms is cancellation residue
    rho = rho.filter(lambda a, b: not target(a, b))
    return q_total, rho


def choose_delta(sigma_coeffs, m: int | None = None) -> float:
    """``delta = min_k M_k^(-1/k)`` so that ``max_k delta^k M_k = 1``.

    Parameters
    ----------
    sigma_coeffs : mapping ``k -> M_k`` or ``k -> MixedPolynomial``
        Coefficient magnitudes (already divided by the ``W`` normalization).

    Raises
    ------
    ValueError
        If every ``M_k`` is zero.
    """
    M = {}
    for k, v in dict(sigma_coeffs).items():
        M[int(k)] = v.max_abs_coefficient() if isinstance(v, MixedPolynomial) else float(v)
    cands = [Mk ** (-1.0 / k) for k, Mk in M.items() if Mk > 0]
    if not cands:
        raise ValueError("all sigma components vanish")
    return float(min(cands))


def dilate_and_normalize(rho: MixedPolynomial, delta: float, eps: float,
                         degree: int | None = None) -> MixedPolynomial:
    """``rho(delta Z, eps W)`` divided so that ``Re W`` has coefficient 1."""
    if delta <= 0 or eps <= 0:
        raise ValueError("delta and eps must be positive")
    terms = {}
    for (a, b), c in rho:
        terms[(a, b)] = c * delta ** (a[0] + b[0]) * eps ** (a[1] + b[1])
    out = MixedPolynomial(2, terms, prune=False)
    kw = out.coefficient((0, 1), (0, 0))
    if abs(kw.imag) > 1e-12 * abs(kw) or kw.real <= 0:
        raise ScalingError("W coefficient is not positive real after the shear")
    out = out * (1.0 / (2.0 * kw.real))
    if degree is not None:
        out = out.truncate(degree)
    return out


# ---------------------------------------------------------------------------
# the run


@dataclass(frozen=True)
class ScalingStep:
    index: int
    a: np.ndarray
    a2_hat: complex
    b: complex
    q: MixedPolynomial
    delta: float
    eps: float
    rho: MixedPolynomial
    c: complex = 1.0
    dropped: float = 0.0

    @property
    def C11(self) -> complex:
        return self.rho.coefficient((1, 0), (1, 0))


@dataclass
class ScalingRun:
    form: CanonicalBoundaryForm
    sequence: ApproachSequence | None
    steps: list
    limit: MixedPolynomial
    converged: bool
    diagnostics: dict = field(default_factory=dict)

    def rows(self) -> list[dict]:
        m = self.form.m
        out = []
        for s in self.steps:
            out.append({"nu": s.index, "abs_a1": abs(s.a[0]), "eps": s.eps, "delta": s.delta,
                        "abs_b": abs(s.b), "C11": abs(s.C11), "blowup": s.delta ** (2 * m) / s.eps})
        return out


def scaling_step(form: CanonicalBoundaryForm, a, index: int = 0, degree: int | None = None,
                 box=None) -> ScalingStep:
    m = form.m
    degree = 2 * m + 2 if degree is None else degree
    a = np.asarray(a, dtype=np.complex128)
    a2_hat = anchor_point(form, a, box)
    eps = abs(a[1] - a2_hat)
    if eps == 0:
        raise ScalingError("sequence point lies on the boundary", index)
    sh = shear_A(form, a[0], a2_hat)
    rho = sh.pullback(form.rho).truncate(degree)
    # constant and linear pure-Z terms vanish analytically; drop their rounding residue
    junk = rho.filter(lambda al, be: _z_only((al, be)) and al[0] + be[0] <= 1)
    dropped = junk.max_abs_coefficient() if not junk.is_zero() else 0.0
    rho = rho - junk
    q, rho = normalize_B(rho, m, kappa=sh.kappa, degree=degree)
    scale = 2.0 * sh.kappa * eps
    delta = choose_delta({k: s.max_abs_coefficient() / scale for k, s in sigma_components(rho, m).items()})
    out = dilate_and_normalize(rho, delta, eps, degree)
    return ScalingStep(index, a, a2_hat, sh.b, q, delta, eps, out, sh.c, dropped)


def _limit_part(rho: MixedPolynomial, m: int) -> MixedPolynomial:
    return rho.filter(lambda a, b: _z_only((a, b)) and 2 <= a[0] + b[0] <= 2 * m)


def run_scaling(form: CanonicalBoundaryForm, sequence, degree: int | None = None, box=None) -> ScalingRun:
    """Run the pipeline along ``sequence`` (an ApproachSequence or array of points).

    Raises
    ------
    ScalingError
        From any failing step, tagged with its index.
    """
    seq = sequence if isinstance(sequence, ApproachSequence) else None
    pts = sequence.points if seq is not None else np.atleast_2d(np.asarray(sequence, dtype=np.complex128))
    steps = []
    for i, a in enumerate(pts):
        try:
            steps.append(scaling_step(form, a, i, degree, box))
        except ScalingError as exc:
            raise ScalingError(str(exc), i) from exc
    m = form.m
    tail = [_limit_part(s.rho, m) for s in steps[-3:]]
    cauchy = [tail[i].max_coefficient_difference(tail[i + 1]) for i in range(len(tail) - 1)]
    converged = len(tail) >= 2 and max(cauchy) < CAUCHY_TOL
    limit = tail[-1]
    diag = {
        "C11": [abs(s.C11) for s in steps],
        "blowup": [s.delta ** (2 * m) / s.eps for s in steps],
        "cauchy": cauchy,
        "dropped": [s.dropped for s in steps],
    }
    if seq is not None:
        diag["b_over_d"] = [abs(s.b) / d for s, d in zip(steps, seq.distances)]
        diag["eps_over_d"] = [s.eps / d for s, d in zip(steps, seq.distances)]
    return ScalingRun(form, seq, steps, limit, converged, diag)


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class TrajectoryCheck:
    maximum: float
    trajectory: np.ndarray
    passed: bool
    applicable: bool = True


def _ratio_check(traj, bound: float) -> TrajectoryCheck:
    traj = np.asarray(traj, dtype=float)
    med = float(np.median(traj))
    mx = float(traj.max())
    passed = mx == 0.0 or (med > 0 and mx / med < bound)
    return TrajectoryCheck(mx, traj, passed)


def blowup_check(run: ScalingRun) -> TrajectoryCheck:
    """``eps^-1 delta^(2m)`` trajectory; passes when max/median < 1e3."""
    return _ratio_check(run.diagnostics["blowup"], 1e3)


def b_bound_check(run: ScalingRun) -> TrajectoryCheck:
    """``|b_nu| / dist(z_nu, boundary)``; passes when max/median < 1e2.

    Returns an inapplicable result for ``m = 1``.
    """
    traj = np.asarray(run.diagnostics.get("b_over_d", []), dtype=float)
    if run.form.m < 2:
        return TrajectoryCheck(float(traj.max(initial=0.0)), traj, False, applicable=False)
    if traj.size == 0:
        raise ValueError("run has no sequence distances")
    return _ratio_check(traj, 1e2)


def c11_slope(run: ScalingRun) -> float:
    """Least-squares slope of ``log|C11|`` against ``log delta``."""
    c = np.array(run.diagnostics["C11"])
    d = np.array([s.delta for s in run.steps])
    keep = c > 0
    if keep.sum() < 2:
        return float("inf")
    return float(np.polyfit(np.log(d[keep]), np.log(c[keep]), 1)[0])


def _membership(dom, pts):
    if isinstance(dom, DomainSpec):
        return dom.values(pts) < 0
    if isinstance(dom, MixedPolynomial):
        return dom.eval_many(pts).real < 0
    return np.asarray(dom(pts)) < 0


def hausdorff_window_distance(A, B, window, grid: int = 12) -> float:
    """Symmetric-difference surrogate on a window grid.

    ``A`` and ``B`` are domains, polynomials or vectorised defining
    callables.  Returns the fraction of grid points inside exactly one of
    them times the window diameter.
    """
    window = np.asarray(window, dtype=float)
    axes = [np.linspace(window[0, k], window[1, k], grid) for k in range(window.shape[1])]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, window.shape[1])
    pts = mesh[:, 0::2] + 1j * mesh[:, 1::2]
    diff = _membership(A, pts) ^ _membership(B, pts)
    return float(diff.mean() * np.linalg.norm(window[1] - window[0]))


@dataclass(frozen=True)
class DFReport:
    minimum: float
    passed: bool
    fd_error: float
    n_points: int


def df_grid(rho: MixedPolynomial, count: int = 1000, level: float = -0.1, window=None, rng=0) -> np.ndarray:
    """Random window points with ``rho < level``."""
    rng = np.random.default_rng(rng)
    window = np.array([[-1.0] * 4, [1.0] * 4]) if window is None else np.asarray(window, dtype=float)
    out = []
    while sum(len(o) for o in out) < count:
        x = rng.uniform(window[0], window[1], size=(4 * count, 4))
        z = x[:, 0::2] + 1j * x[:, 1::2]
        out.append(z[rho.eval_many(z).real < level])
    return np.vstack(out)[:count]


def _df_hessian(rho: MixedPolynomial, delta: float, z) -> np.ndarray:
    r = rho(z).real
    g = rho.complex_gradient(z)
    H = complex_hessian(rho, z)
    return delta * (-r) ** (delta - 1) * H + delta * (1 - delta) * (-r) ** (delta - 2) * np.outer(g, g.conj())


def _fd_complex_hessian(f, z, h: float = 1e-4) -> np.ndarray:
    n = len(z)
    H = np.zeros((n, n), dtype=np.complex128)
    E = np.eye(n)
    for j in range(n):
        for k in range(n):
            # d^2/dz_j dzbar_k = 1/4 (d_xj - i d_yj)(d_xk + i d_yk)
            def d2(u, v):
                return (f(z + h * u + h * v) - f(z + h * u - h * v) - f(z - h * u + h * v) + f(z - h * u - h * v)) / (4 * h * h)
            xj, yj, xk, yk = E[j], 1j * E[j], E[k], 1j * E[k]
            H[j, k] = 0.25 * (d2(xj, xk) + d2(yj, yk) + 1j * (d2(xj, yk) - d2(yj, xk)))
    return H


def df_psh_check(rho: MixedPolynomial, delta: float, grid=None, tol: float = 1e-9, n_fd: int = 5) -> DFReport:
    """Smallest Levi-Hessian eigenvalue of ``-(-rho)^delta`` over ``grid``.

    Raises
    ------
    ValueError
        If ``delta`` is outside ``(0, 1]`` or a grid point has ``rho >= 0``.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    grid = df_grid(rho) if grid is None else np.atleast_2d(np.asarray(grid, dtype=np.complex128))
    vals = rho.eval_many(grid).real
    if np.any(vals >= 0):
        raise ValueError(f"grid point with rho >= 0: {grid[int(np.argmax(vals))]}")
    mins = np.array([np.linalg.eigvalsh(_df_hessian(rho, delta, z)).min() for z in grid])

    def f(z):
        return -(-rho(z).real) ** delta

    fd_err = 0.0
    for z in grid[:n_fd]:
        A = _df_hessian(rho, delta, z)
        fd_err = max(fd_err, float(np.abs(A - _fd_complex_hessian(f, z)).max() / max(1.0, np.abs(A).max())))
    mn = float(mins.min())
    return DFReport(mn, mn >= -tol, fd_err, len(grid))


def limit_domain(P: MixedPolynomial) -> PolynomialDefiningFunction:
    """Defining function ``Re W + P`` of the model limit."""
    return PolynomialDefiningFunction(MixedPolynomial.real_part_of(2, 1) + P)
