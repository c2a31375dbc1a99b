"""Explicit domains in C^n and the analytic conditions placed on them.

Covers the egg domains ``|W + P(Z)|^2 + sigma(|Z|^2) < 1`` and their
unsheared form, balls and polydiscs, and canonical boundary models
``Re w + psi(z) + R1(z) + (Im w) R2(z) + R3(z, Im w) < 0``.

Conventions
-----------
Points are complex vectors.  Real coordinates are ordered
``(x1, y1, x2, y2, ...)`` and the real gradient is obtained from the
Wirtinger gradient by ``d/dx = 2 Re d/dz`` and ``d/dy = -2 Im d/dz``.
The complex Hessian is ``H[j, k] = d^2 rho / dz_j dzbar_k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import polyalg
from .polyalg import MixedPolynomial
from .profiles import RadialProfile

BOUNDARY_TOL = 1e-9


def real_gradient_from_wirtinger(dz: np.ndarray) -> np.ndarray:
    """Interleave ``(2 Re dz_j, -2 Im dz_j)``."""
    dz = np.asarray(dz, dtype=np.complex128)
    out = np.empty(2 * dz.size)
    out[0::2] = 2.0 * dz.real
    out[1::2] = -2.0 * dz.imag
    return out


def to_real(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def to_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


# ---------------------------------------------------------------------------
# defining functions


class DefiningFunction:
    """Real defining function with Wirtinger gradient and complex Hessian.

    Subclasses implement :meth:`values` (vectorised), :meth:`complex_gradient`
    and :meth:`hessian`.
    """

    tag = "abstract"
    dimension: int

    def values(self, points) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, point) -> float:
        return float(self.values(np.asarray(point, dtype=np.complex128)[None, :])[0])

    def complex_gradient(self, point) -> np.ndarray:
        raise NotImplementedError

    def gradient(self, point) -> np.ndarray:
        """Real gradient, length ``2n``."""
        return real_gradient_from_wirtinger(self.complex_gradient(point))

    def hessian(self, point) -> np.ndarray:
        raise NotImplementedError

    def real_hessian(self, point, h: float = 1e-6) -> np.ndarray:
        """Real ``2n x 2n`` Hessian by central differences of the gradient."""
        x0 = to_real(np.asarray(point, dtype=np.complex128))
        m = x0.size
        out = np.empty((m, m))
        for i in range(m):
            e = np.zeros(m)
            e[i] = h
            out[:, i] = (self.gradient(to_complex(x0 + e)) - self.gradient(to_complex(x0 - e))) / (2 * h)
        return 0.5 * (out + out.T)

    def scaled(self, factor: float) -> "DefiningFunction":
        return ScaledDefiningFunction(self, factor)


class ScaledDefiningFunction(DefiningFunction):
    """``factor * rho`` for a positive factor."""

    tag = "scaled"

    def __init__(self, base: DefiningFunction, factor: float):
        if factor <= 0:
            raise ValueError("factor must be positive")
        self.base, self.factor, self.dimension = base, float(factor), base.dimension

    def values(self, points):
        return self.factor * self.base.values(points)

    def complex_gradient(self, point):
        return self.factor * self.base.complex_gradient(point)

    def hessian(self, point):
        return self.factor * self.base.hessian(point)


class PolynomialDefiningFunction(DefiningFunction):
    """Defining function backed by a real-valued :class:`MixedPolynomial`."""

    tag = "polynomial"

    def __init__(self, poly: MixedPolynomial):
        if not poly.is_real:
            raise ValueError("defining polynomial must be real-valued")
        self.poly = poly
        self.dimension = poly.dimension

    def values(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
        return self.poly.eval_many(pts).real

    def complex_gradient(self, point):
        return self.poly.complex_gradient(point)

    def hessian(self, point):
        return polyalg.complex_hessian(self.poly, point)

    def compose_affine(self, matrix, shift=None) -> "PolynomialDefiningFunction":
        return PolynomialDefiningFunction(polyalg.compose_affine(self.poly, matrix, shift))


class EggDefiningFunction(DefiningFunction):
    """``|W + P(Z)|^2 + sigma(|Z|^2) - 1`` on ``C^2``.

    ``P`` is given by ascending coefficients; ``P = 0`` gives the
    unsheared function ``|w|^2 + sigma(|z|^2) - 1``.
    """

    tag = "composite"
    dimension = 2

    def __init__(self, P_coeffs: Sequence[complex], sigma: RadialProfile):
        self.P = np.polynomial.Polynomial(np.asarray(P_coeffs, dtype=np.complex128))
        self.dP = self.P.deriv()
        self.sigma = sigma

    def values(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
        Z, W = pts[:, 0], pts[:, 1]
        return np.abs(W + self.P(Z)) ** 2 + self.sigma.value(np.abs(Z) ** 2) - 1.0

    def complex_gradient(self, point):
        Z, W = complex(point[0]), complex(point[1])
        s = np.conj(W + self.P(Z))
        t = abs(Z) ** 2
        dZ = self.dP(Z) * s + np.conj(Z) * float(self.sigma.d1(np.array([t]))[0])
        return np.array([dZ, s], dtype=np.complex128)

    def hessian(self, point):
        Z = complex(point[0])
        t = np.array([abs(Z) ** 2])
        dp = complex(self.dP(Z))
        hzz = abs(dp) ** 2 + float(self.sigma.d1(t)[0]) + t[0] * float(self.sigma.d2(t)[0])
        return np.array([[hzz, dp], [np.conj(dp), 1.0]], dtype=np.complex128)


class PolydiscDefiningFunction(DefiningFunction):
    """``max_j |z_j|^2 - 1``; smooth away from the corners."""

    tag = "polydisc"

    def __init__(self, n: int):
        self.dimension = n

    def values(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
        return np.max(np.abs(pts) ** 2, axis=1) - 1.0

    def _active(self, point):
        return int(np.argmax(np.abs(np.asarray(point))))

    def complex_gradient(self, point):
        z = np.asarray(point, dtype=np.complex128)
        g = np.zeros(self.dimension, dtype=np.complex128)
        j = self._active(z)
        g[j] = np.conj(z[j])
        return g

    def hessian(self, point):
        h = np.zeros((self.dimension, self.dimension), dtype=np.complex128)
        h[self._active(point), self._active(point)] = 1.0
        return h


# ---------------------------------------------------------------------------
# domain specs


@dataclass
class DomainSpec:
    """A bounded (or clipped) domain with its defining function.

    Attributes
    ----------
    box : (2, 2n) array
        Lower and upper real-coordinate bounds.
    witness : complex vector
        Interior point.
    bounded : bool
        False for clipped unbounded models; the corner sanity check is then
        skipped.
    boundary_sampler : callable, optional
        ``sampler(count, rng) -> (count, n)`` boundary points.
    enclosing_ball : (center, radius), optional
        A Euclidean ball containing the domain.
    """

    dimension: int
    defining: DefiningFunction
    box: np.ndarray
    label: str
    witness: np.ndarray
    kind: str = "generic"
    bounded: bool = True
    boundary_sampler: Callable | None = None
    enclosing_ball: tuple | None = None
    params: dict = field(default_factory=dict)

    def values(self, points) -> np.ndarray:
        return self.defining.values(points)

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
        inside = self.defining.values(pts) < 0
        if not self.bounded:
            x = to_real(pts)
            inside &= np.all((x >= self.box[0]) & (x <= self.box[1]), axis=1)
        return inside

    def corners(self) -> np.ndarray:
        m = 2 * self.dimension
        out = np.array([[self.box[b, i] for i, b in enumerate(bits)]
                        for bits in itertools.product((0, 1), repeat=m)])
        return to_complex(out)

    def check_invariants(self) -> list[str]:
        """Violated invariants (empty when all hold)."""
        problems = []
        if not np.all(np.isfinite(self.box)):
            problems.append("bounding box is not finite")
        if not self.defining(self.witness) < 0:
            problems.append("witness is not interior")
        if self.bounded and np.any(self.defining.values(self.corners()) <= 0):
            problems.append("defining function not positive at every box corner")
        return problems

    def sample_boundary(self, count: int, rng=None) -> np.ndarray:
        if self.boundary_sampler is None:
            raise ValueError(f"domain {self.label!r} has no boundary sampler")
        rng = np.random.default_rng(rng)
        return self.boundary_sampler(count, rng)

    def sample_interior(self, count: int, rng=None, max_rounds: int = 200) -> np.ndarray:
        """Rejection samples from the bounding box."""
        rng = np.random.default_rng(rng)
        got: list[np.ndarray] = []
        total = 0
        for _ in range(max_rounds):
            x = rng.uniform(self.box[0], self.box[1], size=(max(4 * count, 64), 2 * self.dimension))
            z = to_complex(x)
            z = z[self.contains(z)]
            got.append(z)
            total += len(z)
            if total >= count:
                break
        pts = np.concatenate(got)[:count]
        if len(pts) < count:
            raise RuntimeError("interior sampling failed; domain too thin for its box")
        return pts


def _box(lo, hi) -> np.ndarray:
    return np.vstack([np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)])


def _sphere_samples(count, n, rng):
    g = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def unit_ball(n: int = 2) -> DomainSpec:
    terms = {}
    for j in range(n):
        e = tuple(1 if k == j else 0 for k in range(n))
        terms[(e, e)] = 1.0
    poly = MixedPolynomial(n, terms) - 1.0
    return DomainSpec(
        n, PolynomialDefiningFunction(poly), _box([-1.05] * 2 * n, [1.05] * 2 * n),
        f"ball{n}", np.zeros(n, dtype=np.complex128), kind="ball",
        boundary_sampler=lambda c, rng: _sphere_samples(c, n, rng),
        enclosing_ball=(np.zeros(n, dtype=np.complex128), 1.0),
        params={"n": n},
    )


def unit_polydisc(n: int = 2) -> DomainSpec:
    def sampler(count, rng):
        r = np.sqrt(rng.uniform(0, 1, (count, n)))
        z = r * np.exp(2j * np.pi * rng.uniform(0, 1, (count, n)))
        j = rng.integers(0, n, count)
        z[np.arange(count), j] /= np.abs(z[np.arange(count), j])
        return z

    return DomainSpec(
        n, PolydiscDefiningFunction(n), _box([-1.05] * 2 * n, [1.05] * 2 * n),
        f"polydisc{n}", np.zeros(n, dtype=np.complex128), kind="polydisc",
        boundary_sampler=sampler,
        enclosing_ball=(np.zeros(n, dtype=np.complex128), float(np.sqrt(n))),
        params={"n": n},
    )


# ---------------------------------------------------------------------------
# sigma conditions


@dataclass(frozen=True)
class SigmaReport:
    """Pass/fail of the five profile conditions, with witnesses.

    ``decay`` is a grid heuristic: it supports, never certifies, the
    ``o(x)`` statements.
    """

    decay: bool
    normalized: bool
    increasing: bool
    strictly_subharmonic: bool
    convex_near_zero: bool
    nonconvex_somewhere: bool
    witnesses: Mapping[str, float | None]

    @property
    def basic_ok(self) -> bool:
        return self.decay and self.normalized and self.increasing and self.strictly_subharmonic

    @property
    def all_ok(self) -> bool:
        return self.basic_ok and self.convex_near_zero and self.nonconvex_somewhere

    def as_row(self) -> dict:
        return {
            "decay": self.decay, "normalized": self.normalized, "increasing": self.increasing,
            "strictly_subharmonic": self.strictly_subharmonic,
            "convex_near_zero": self.convex_near_zero, "nonconvex_somewhere": self.nonconvex_somewhere,
        }


def default_sigma_grid(eps: float, n_uniform: int = 2000) -> np.ndarray:
    geo = np.geomspace(1e-6, 1e-2, 400, endpoint=False)
    lin = np.linspace(1e-2, 1.0 + eps, n_uniform, endpoint=False)
    return np.concatenate([geo, lin])


def _first_bad(mask, x):
    idx = np.flatnonzero(mask)
    return float(x[idx[0]]) if idx.size else None


def check_sigma_conditions(sigma: RadialProfile, grid=None) -> SigmaReport:
    """Test the five egg-profile conditions on a grid of ``(0, 1+eps)``.

    Parameters
    ----------
    sigma : RadialProfile
    grid : array_like, optional
        At least 10^3 points; defaults to a geometric refinement on
        ``[1e-6, 1e-2)`` followed by a uniform grid up to ``1 + eps``.

    Returns
    -------
    SigmaReport
    """
    eps = sigma.eps
    x = np.sort(np.asarray(default_sigma_grid(eps) if grid is None else grid, dtype=float))
    x = x[(x > 0) & (x < 1.0 + eps)]
    if x.size < 1000:
        raise ValueError("grid must contain at least 10^3 points in (0, 1+eps)")
    s0, s1, s2 = sigma.value(x), sigma.d1(x), sigma.d2(x)
    wit: dict[str, float | None] = {}

    # (1) sigma(0) = 0 and sigma', sigma'' = o(x): ratios shrink tenfold over the finest decade.
    zero_ok = abs(float(sigma.value(np.array([0.0]))[0])) <= 1e-15
    lo = x[0]
    dec = x[x <= 10 * lo]
    decay_ok = zero_ok
    for d in (sigma.d1, sigma.d2):
        r = np.abs(d(dec)) / dec
        mono = bool(np.all(np.diff(r) >= -1e-12 * max(r.max(), 1e-300)))
        shrink = r[0] <= r[-1] / 10.0 * (1 + 1e-6)
        decay_ok = decay_ok and mono and bool(shrink)
    wit["decay"] = None if decay_ok else float(lo)

    # (2)
    one = float(sigma.value(np.array([1.0]))[0])
    normalized = abs(one - 1.0) <= 1e-9
    wit["normalized"] = None if normalized else one

    # (3), (4)
    wit["increasing"] = _first_bad(s1 <= 0, x)
    q = x * s2 + s1
    wit["strictly_subharmonic"] = _first_bad(q <= 0, x)

    # (5a) sigma'' > 0 on (0, eps)
    near = x < eps
    wit["convex_near_zero"] = _first_bad(s2[near] <= 0, x[near])

    # (5b) x -> sigma(x^2) fails to be convex somewhere on [0, sqrt(1+eps))
    xs = np.linspace(0.0, np.sqrt(1.0 + eps), 4001, endpoint=False)
    f = sigma.value(xs**2)
    d2 = f[2:] - 2 * f[1:-1] + f[:-2]
    tol = 1e-12 * max(1.0, float(np.abs(f).max()))
    neg = d2 < -tol
    wit["nonconvex_somewhere"] = float(xs[1:-1][np.argmin(d2)]) if neg.any() else None

    return SigmaReport(
        decay=decay_ok,
        normalized=normalized,
        increasing=wit["increasing"] is None,
        strictly_subharmonic=wit["strictly_subharmonic"] is None,
        convex_near_zero=wit["convex_near_zero"] is None,
        nonconvex_somewhere=bool(neg.any()),
        witnesses=wit,
    )


@dataclass(frozen=True)
class RadialSubharmonicReport:
    minimum: float
    argmin: float
    subharmonic: bool
    polynomial_cross_check: float | None


def radial_subharmonicity(phi: RadialProfile, grid=None, tol: float = 1e-12) -> RadialSubharmonicReport:
    """Minimum of ``phi''(x) + phi'(x)/x``, the Laplacian of ``phi(|z|)``.

    When ``phi`` is a polynomial in ``x^2`` the same minimum is recomputed
    from the Laplacian of the mixed polynomial ``phi(|z|)`` on a disc grid.
    """
    if grid is None:
        grid = np.concatenate([np.geomspace(1e-6, 1e-2, 200, endpoint=False), np.linspace(1e-2, 1.0, 800)])
    x = np.asarray(grid, dtype=float)
    x = x[x > 0]
    q = phi.d2(x) + phi.d1(x) / x
    i = int(np.argmin(q))
    cross = None
    c = phi.poly_coeffs
    if c is not None and all(abs(v) == 0 for v in c[1::2]):
        terms = {((k,), (k,)): c[2 * k] for k in range(len(c[0::2])) if c[2 * k] != 0}
        p = MixedPolynomial(1, terms)
        if not p.is_zero():
            disc = polyalg.unit_disc_grid(radius=float(x.max()))
            cross = polyalg.subharmonicity_scan(p, disc).minimum
        else:
            cross = 0.0
    m = float(q[i])
    return RadialSubharmonicReport(m, float(x[i]), m >= -tol, cross)


# ---------------------------------------------------------------------------
# egg domains


def _holomorphic_coeffs(P) -> np.ndarray:
    if isinstance(P, MixedPolynomial):
        if P.dimension != 1:
            raise ValueError("P must be a polynomial in one variable")
        coeffs = np.zeros(max(P.degree, 0) + 1, dtype=np.complex128)
        for (a, b), c in P:
            if b[0] != 0:
                raise ValueError("P must be holomorphic")
            coeffs[a[0]] += c
        return coeffs
    return np.asarray(P, dtype=np.complex128).ravel()


def _egg_sampler(P: np.polynomial.Polynomial, sigma: RadialProfile):
    def sampler(count, rng):
        # half area-uniform, half uniform in |z| to resolve both the rim and z = 0
        u = rng.uniform(0, 1, count)
        r = np.where(np.arange(count) % 2 == 0, np.sqrt(u), u)
        z = r * np.exp(2j * np.pi * rng.uniform(0, 1, count))
        rad = np.sqrt(np.clip(1.0 - sigma.value(r**2), 0.0, None))
        w = rad * np.exp(2j * np.pi * rng.uniform(0, 1, count))
        return np.column_stack([z, w - P(z)])

    return sampler


def build_egg_domain(P, sigma: RadialProfile, check: bool = True) -> DomainSpec:
    """The egg domain ``{|W + P(Z)|^2 + sigma(|Z|^2) < 1}``.

    Raises
    ------
    ValueError
        If ``P`` is constant or ``sigma`` fails conditions (1)-(4).
    """
    coeffs = _holomorphic_coeffs(P)
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if nz.size == 0 or nz.max() == 0:
        raise ValueError("P must be nonconstant")
    if check:
        rep = check_sigma_conditions(sigma)
        if not rep.basic_ok:
            bad = [k for k, v in rep.as_row().items() if not v][:4]
            raise ValueError(f"sigma fails profile conditions: {bad}")
    poly = np.polynomial.Polynomial(coeffs)
    return _egg_spec(coeffs, sigma, sheared=True, poly=poly)


def _egg_spec(coeffs, sigma, sheared: bool, poly) -> DomainSpec:
    th = np.linspace(0, 2 * np.pi, 721)
    supP = float(np.abs(poly(np.exp(1j * th))).max()) if sheared else 0.0
    wmax = (1.0 + supP) * 1.05 + 0.05
    box = _box([-1.05, -1.05, -wmax, -wmax], [1.05, 1.05, wmax, wmax])
    P0 = complex(poly(0.0)) if sheared else 0j
    witness = np.array([0.0, -0.5 - P0], dtype=np.complex128)
    defining = EggDefiningFunction(coeffs if sheared else [0.0], sigma)
    radius = float(np.sqrt(1.0 + (1.0 + supP) ** 2))
    return DomainSpec(
        2, defining, box, "egg" if sheared else "omega", witness,
        kind="egg" if sheared else "omega",
        boundary_sampler=_egg_sampler(poly if sheared else np.polynomial.Polynomial([0.0]), sigma),
        enclosing_ball=(np.zeros(2, dtype=np.complex128), radius),
        params={"P": [complex(c) for c in coeffs], "sigma": sigma.to_record(), "sheared": sheared},
    )


def unshear(egg: DomainSpec) -> DomainSpec:
    """The image ``Omega = Psi(D)`` under ``Psi(Z, W) = (Z, W + P(Z))``."""
    if egg.kind != "egg":
        raise ValueError("unshear expects a domain built by build_egg_domain")
    d: EggDefiningFunction = egg.defining  # type: ignore[assignment]
    return _egg_spec(np.array([0.0]), d.sigma, sheared=False, poly=np.polynomial.Polynomial([0.0]))


def egg_psi(egg: DomainSpec) -> Callable[[np.ndarray], np.ndarray]:
    """The unshearing map ``(Z, W) -> (Z, W + P(Z))``, vectorised over rows."""
    P = egg.defining.P  # type: ignore[attr-defined]

    def psi(points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
        return np.column_stack([pts[:, 0], pts[:, 1] + P(pts[:, 0])])

    return psi


def weak_locus_point(egg: DomainSpec) -> np.ndarray:
    """``p* = (0, -(1 + P(0)))`` on the boundary of the egg domain."""
    P0 = complex(egg.defining.P(0.0)) if egg.kind == "egg" else 0j  # type: ignore[attr-defined]
    return np.array([0.0, -(1.0 + P0)], dtype=np.complex128)


# ---------------------------------------------------------------------------
# canonical boundary models


@dataclass(frozen=True)
class CanonicalBoundaryForm:
    """``Re w + psi(z) + R1(z) + (Im w) R2(z) + R3(z, Im w)``.

    ``psi``, ``R1`` and ``R2`` are one-variable mixed polynomials; ``R3`` is
    a two-variable one whose second variable stands for the real quantity
    ``Im w``.  ``rho`` is the assembled two-variable polynomial in ``(z, w)``.
    """

    m: int
    psi: MixedPolynomial
    R1: MixedPolynomial
    R2: MixedPolynomial
    R3: MixedPolynomial
    truncation: int | None
    rho: MixedPolynomial


def _lift_z(p: MixedPolynomial) -> MixedPolynomial:
    return MixedPolynomial(2, {((a[0], 0), (b[0], 0)): c for (a, b), c in p})


def canonical_model(m: int, psi: MixedPolynomial, R1=None, R2=None, R3=None,
                    truncation: int | None = None, box=None):
    """Assemble and validate a canonical model domain.

    Returns
    -------
    (CanonicalBoundaryForm, DomainSpec)

    Raises
    ------
    ValueError
        Listing every violated structural condition.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    zero1 = MixedPolynomial.zero(1)
    R1 = zero1 if R1 is None else R1
    R2 = zero1 if R2 is None else R2
    R3 = MixedPolynomial.zero(2) if R3 is None else R3
    problems = []
    if psi.dimension != 1:
        problems.append("psi must be a polynomial in one variable")
    else:
        if not psi.is_real:
            problems.append("psi must be real-valued")
        if psi.is_zero() or psi.homogeneous_component(2 * m) != psi:
            problems.append(f"psi must be homogeneous of degree {2 * m}")
        if not psi.pluriharmonic_part().is_zero():
            problems.append("psi has pluriharmonic terms")
        elif psi.is_real and not polyalg.subharmonicity_scan(psi).subharmonic:
            problems.append("psi is not subharmonic")
    if not R1.is_zero() and R1.min_degree() < 2 * m + 1:
        problems.append(f"R1 must vanish to order >= {2 * m + 1}")
    need2 = m + 1 if m >= 2 else 1
    if not R2.is_zero() and R2.min_degree() < need2:
        problems.append(f"R2 must vanish to order >= {need2}")
    for (a, b), _ in R3:
        if a[0] + b[0] < 1 or a[1] + b[1] < 2:
            problems.append("R3 must be O(|z| |Im w|^2)")
            break
    if problems:
        raise ValueError("; ".join(problems))

    re_w = MixedPolynomial.real_part_of(2, 1)
    im_w = MixedPolynomial.imag_part_of(2, 1)
    rho = re_w + _lift_z(psi) + _lift_z(R1) + im_w * _lift_z(R2)
    if not R3.is_zero():
        rho = rho + R3.substitute([MixedPolynomial.variable(2, 0), im_w])
    if truncation is not None:
        rho = rho.truncate(truncation)
    form = CanonicalBoundaryForm(m, psi, R1, R2, R3, truncation, rho)

    if box is None:
        box = _box([-1.0, -1.0, -1.0, -1.0], [1.0, 1.0, 1.0, 1.0])
    box = np.asarray(box, dtype=float)
    defining = PolynomialDefiningFunction(rho)

    rest = rho - re_w

    def sampler(count, rng):
        z = to_complex(rng.uniform(box[0, :2], box[1, :2], size=(count, 2)))[:, 0]
        s = rng.uniform(box[0, 3], box[1, 3], count)
        # rho has no Re w dependence besides the linear term, so the boundary is a graph
        r = rest.eval_many(np.column_stack([z, 1j * s])).real
        return np.column_stack([z, -r + 1j * s])

    witness = np.array([0.0, 0.5 * box[0, 2]], dtype=np.complex128)
    spec = DomainSpec(
        2, defining, box, f"canonical_m{m}", witness, kind="canonical", bounded=False,
        boundary_sampler=sampler,
        params={"m": m, "psi": psi.to_records(), "R1": R1.to_records(), "R2": R2.to_records(),
                "R3": R3.to_records(), "truncation": truncation},
    )
    return form, spec


def monomial_model(m: int, box=None):
    """``{Re w + |z|^(2m) < 0}``."""
    return canonical_model(m, MixedPolynomial.abs_squared(1, 0, m), box=box)


# ---------------------------------------------------------------------------
# graph function of the unsheared egg near (0, -1)


@dataclass(frozen=True)
class GraphFunctionValue:
    value: float
    hessian: np.ndarray
    fd_hessian: np.ndarray

    @property
    def fd_error(self) -> float:
        return float(np.max(np.abs(self.hessian - self.fd_hessian)))


def _g_parts(sigma: RadialProfile, x: float, y: float, v: float):
    t = np.array([x * x + y * y])
    s1, s2 = float(sigma.d1(t)[0]), float(sigma.d2(t)[0])
    S = 1.0 - v * v - float(sigma.value(t)[0])
    gS = np.array([-2 * x * s1, -2 * y * s1, -2 * v])
    HS = np.array([
        [-(2 * s1 + 4 * x * x * s2), -4 * x * y * s2, 0.0],
        [-4 * x * y * s2, -(2 * s1 + 4 * y * y * s2), 0.0],
        [0.0, 0.0, -2.0],
    ])
    return S, gS, HS


def graph_function_g(sigma: RadialProfile, z: complex, v: float) -> GraphFunctionValue:
    """``g(z, v) = -sqrt(1 - v^2 - sigma(|z|^2))`` and its real Hessian in ``(x, y, v)``.

    Raises
    ------
    ValueError
        Outside ``|v| < sqrt(1 - sigma(|z|^2))``.
    """
    x, y = float(np.real(z)), float(np.imag(z))
    S, gS, HS = _g_parts(sigma, x, y, v)
    if not S > 0:
        raise ValueError("point outside the domain of definition of g")
    rS = np.sqrt(S)
    H = -HS / (2 * rS) + np.outer(gS, gS) / (4 * S * rS)

    def g(p):
        Sp = 1.0 - p[2] ** 2 - float(sigma.value(np.array([p[0] ** 2 + p[1] ** 2]))[0])
        return -np.sqrt(Sp)

    h = 1e-4
    p0 = np.array([x, y, v])
    F = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            ei, ej = np.eye(3)[i] * h, np.eye(3)[j] * h
            F[i, j] = (g(p0 + ei + ej) - g(p0 + ei - ej) - g(p0 - ei + ej) + g(p0 - ei - ej)) / (4 * h * h)
    return GraphFunctionValue(-rS, H, F)
