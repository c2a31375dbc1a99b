"""Boundary geometry: projection, tangent planes, Levi forms, support scans
and paraboloidal approach sequences.

All checks here are sampled.  A PASS means no counterexample was found on
the stated samples, nothing more.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .domains import (
    DomainSpec, graph_function_g, to_complex, to_real, weak_locus_point,
)

NEWTON_TOL = 1e-8
LEVI_TOL = 1e-7
EXCLUSION_RADIUS = 1e-4


@dataclass(frozen=True)
class BoundaryPoint:
    """A boundary point with real gradient and unit outward normal."""

    point: np.ndarray
    gradient: np.ndarray
    normal: np.ndarray
    residual: float

    @classmethod
    def at(cls, domain: DomainSpec, q, tol: float = 1e-9) -> "BoundaryPoint":
        q = np.asarray(q, dtype=np.complex128)
        res = float(domain.defining(q))
        g = domain.defining.gradient(q)
        norm = float(np.linalg.norm(g))
        if norm == 0.0:
            raise ValueError("defining function has vanishing gradient at q")
        if abs(res) > tol * max(1.0, norm):
            raise ValueError(f"point is not on the boundary (rho = {res:.3e})")
        return cls(q, g, g / norm, res)


@dataclass(frozen=True)
class Projection:
    point: BoundaryPoint
    distance: float
    kkt_residual: float
    converged: bool


def _kkt_newton(domain: DomainSpec, x0: np.ndarray, seed: np.ndarray, iters: int = 50):
    """Newton on the KKT system of min |x - x0|^2/2 s.t. rho(x) = 0."""
    rho = domain.defining
    x = seed.copy()
    g = rho.gradient(to_complex(x))
    lam = -float(np.dot(x - x0, g)) / max(float(np.dot(g, g)), 1e-300)
    res = np.inf
    m = x.size
    for _ in range(iters):
        z = to_complex(x)
        g = rho.gradient(z)
        r1 = x - x0 + lam * g
        r2 = rho(z)
        res = float(np.linalg.norm(r1) + abs(r2))
        if res < NEWTON_TOL:
            return x, res, True
        Hr = rho.real_hessian(z)
        J = np.zeros((m + 1, m + 1))
        J[:m, :m] = np.eye(m) + lam * Hr
        J[:m, m] = g
        J[m, :m] = g
        try:
            step = np.linalg.solve(J, -np.concatenate([r1, [r2]]))
        except np.linalg.LinAlgError:
            return x, res, False
        # damp large steps
        scale = min(1.0, 0.25 / max(float(np.linalg.norm(step[:m])), 1e-300))
        x = x + scale * step[:m]
        lam = lam + scale * step[m]
    return x, res, res < NEWTON_TOL


def project_to_boundary(domain: DomainSpec, z, samples=None, n_samples: int = 4000,
                        seeds: int = 6, rng=0) -> Projection:
    """Nearest boundary point to ``z`` (sample seeding plus KKT Newton).

    Falls back to SLSQP from the best sample when every Newton run fails and
    flags the result as not converged.
    """
    z = np.asarray(z, dtype=np.complex128)
    x0 = to_real(z)
    if samples is None:
        samples = domain.sample_boundary(n_samples, rng)
    S = to_real(np.asarray(samples))
    d = np.linalg.norm(S - x0, axis=1)
    order = np.argsort(d)[:seeds]
    best = None
    for i in order:
        x, res, ok = _kkt_newton(domain, x0, S[i])
        if ok:
            dist = float(np.linalg.norm(x - x0))
            if best is None or dist < best[1]:
                best = (x, dist, res)
    converged = best is not None
    if not converged:
        sol = optimize.minimize(
            lambda x: 0.5 * float(np.sum((x - x0) ** 2)), S[order[0]], jac=lambda x: x - x0,
            constraints=[{"type": "eq", "fun": lambda x: domain.defining(to_complex(x)),
                          "jac": lambda x: domain.defining.gradient(to_complex(x))}],
            method="SLSQP", options={"ftol": 1e-14, "maxiter": 200},
        )
        x = sol.x if sol.success else S[order[0]]
        best = (x, float(np.linalg.norm(x - x0)), float(abs(domain.defining(to_complex(x)))))
        warnings.warn("boundary projection: Newton did not converge; using fallback", RuntimeWarning)
    x, dist, res = best
    q = to_complex(x)
    g = domain.defining.gradient(q)
    bp = BoundaryPoint(q, g, g / np.linalg.norm(g), float(domain.defining(q)))
    return Projection(bp, dist, res, converged)


@dataclass(frozen=True)
class TangentPlane:
    point: np.ndarray
    normal: np.ndarray

    def offsets(self, points) -> np.ndarray:
        """Signed offsets ``<s - q, normal>`` in real coordinates."""
        return (to_real(np.atleast_2d(points)) - to_real(self.point)) @ self.normal

    def project(self, v_real: np.ndarray) -> np.ndarray:
        """Orthogonal projection of a real vector onto the plane's direction space."""
        return v_real - np.outer(v_real @ self.normal, self.normal) if v_real.ndim == 2 \
            else v_real - np.dot(v_real, self.normal) * self.normal


def tangent_plane(domain: DomainSpec, q) -> TangentPlane:
    bp = q if isinstance(q, BoundaryPoint) else BoundaryPoint.at(domain, q)
    return TangentPlane(bp.point, bp.normal)


def tangent_direction(normal: np.ndarray) -> np.ndarray:
    """First unit vector from Gram-Schmidt of the coordinate axes against ``normal``."""
    for i in range(normal.size):
        e = np.zeros(normal.size)
        e[i] = 1.0
        v = e - np.dot(e, normal) * normal
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            return v / nv
    raise ValueError("degenerate normal")


def real_tangent_basis(normal: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the real tangent hyperplane."""
    return linalg.null_space(normal[None, :])


# ---------------------------------------------------------------------------
# Levi form


@dataclass(frozen=True)
class LeviReport:
    point: np.ndarray
    eigenvalues: np.ndarray
    classification: str
    tol: float

    @property
    def smallest(self) -> float:
        return float(self.eigenvalues[0]) if self.eigenvalues.size else np.inf


def classify(eigs: np.ndarray, tol: float) -> str:
    if np.any(eigs < -tol):
        return "not-psc"
    if np.all(eigs > tol):
        return "strongly-psc"
    return "weakly-psc"


def levi_eigenvalues(domain: DomainSpec, q) -> np.ndarray:
    """Eigenvalues of the Levi form on the complex tangent space, divided by ``|d rho|``."""
    q = np.asarray(q, dtype=np.complex128)
    g = domain.defining.complex_gradient(q)
    gn = float(np.linalg.norm(g))
    if gn == 0.0:
        raise ValueError("vanishing gradient")
    B = linalg.null_space(g[None, :])
    H = domain.defining.hessian(q)
    M = B.T @ H @ B.conj()
    M = 0.5 * (M + M.conj().T)
    return np.sort(np.linalg.eigvalsh(M)) / gn


def levi_classify(domain: DomainSpec, q, tol: float = LEVI_TOL) -> LeviReport:
    eigs = levi_eigenvalues(domain, q)
    return LeviReport(np.asarray(q, dtype=np.complex128), eigs, classify(eigs, tol), tol)


def omega_boundary_grid(omega: DomainSpec, n_radii: int = 20, n_arg_z: int = 20, n_arg_w: int = 25) -> np.ndarray:
    """Tensor grid on the boundary of ``|w|^2 + sigma(|z|^2) = 1``.

    Radii are uniform on ``[0, 1]`` including both ends; the default size is
    ``20 * 20 * 25 = 10^4`` points.
    """
    sigma = omega.defining.sigma  # type: ignore[attr-defined]
    r = np.linspace(0.0, 1.0, n_radii)
    az = np.linspace(0, 2 * np.pi, n_arg_z, endpoint=False)
    aw = np.linspace(0, 2 * np.pi, n_arg_w, endpoint=False)
    R, AZ, AW = np.meshgrid(r, az, aw, indexing="ij")
    rw = np.sqrt(np.clip(1.0 - sigma.value(R**2), 0.0, None))
    return np.column_stack([(R * np.exp(1j * AZ)).ravel(), (rw * np.exp(1j * AW)).ravel()])


@dataclass(frozen=True)
class LeviDichotomy:
    zero_set_max_tube: float
    min_outside: float
    n_points: int
    n_zero: int
    passed: bool
    eigenvalues: np.ndarray
    points: np.ndarray


def levi_dichotomy(omega: DomainSpec, points=None, zero_tol: float = LEVI_TOL,
                   inner_tube: float = 1e-3, outer_tube: float = 0.05) -> LeviDichotomy:
    """Locate the zero set of the smallest Levi eigenvalue relative to
    ``{z = 0, |w| = 1}``."""
    pts = omega_boundary_grid(omega) if points is None else np.asarray(points)
    lam = np.array([levi_eigenvalues(omega, p)[0] for p in pts])
    tube = np.sqrt(np.abs(pts[:, 0]) ** 2 + (np.abs(pts[:, 1]) - 1.0) ** 2)
    zero = lam <= zero_tol
    max_tube = float(tube[zero].max()) if zero.any() else 0.0
    outside = tube > outer_tube
    min_out = float(lam[outside].min()) if outside.any() else np.inf
    ok = max_tube <= inner_tube and min_out > zero_tol
    return LeviDichotomy(max_tube, min_out, len(pts), int(zero.sum()), ok, lam, pts)


# ---------------------------------------------------------------------------
# support checks


@dataclass(frozen=True)
class SupportReport:
    passed: bool
    worst_offset: float
    worst_margin: float
    witness: np.ndarray | None
    n_samples: int


def _normal_projection(domain: DomainSpec, s0: np.ndarray, n: np.ndarray, reach: float):
    """Root ``t`` of ``rho(s0 + t n) = 0`` closest to 0, or None."""
    def f(t):
        return domain.defining(to_complex(s0 + t * n))

    f0 = f(0.0)
    if f0 == 0.0:
        return 0.0
    direction = -1.0 if f0 > 0 else 1.0
    step = 1e-3 * reach
    prev = 0.0
    while step <= reach:
        t = direction * step
        if np.sign(f(t)) != np.sign(f0):
            a, b = sorted((prev, t))
            return optimize.brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        prev = t
        step *= 2.0
    return None


def local_support_samples(domain: DomainSpec, bp: BoundaryPoint, radii=None, reach: float = 1.0) -> np.ndarray:
    """Boundary points over ``q + r e`` for tangent directions ``e``, found along the normal."""
    if radii is None:
        radii = np.geomspace(0.02, 0.5, 10)
    q = to_real(bp.point)
    out = []
    for e in real_tangent_basis(bp.normal).T:
        for r in radii:
            for sgn in (1.0, -1.0):
                s0 = q + sgn * r * e
                t = _normal_projection(domain, s0, bp.normal, reach)
                if t is not None:
                    out.append(s0 + t * bp.normal)
    return to_complex(np.array(out)) if out else np.zeros((0, domain.dimension), dtype=np.complex128)


def strict_support_check(domain: DomainSpec, q, n_samples: int = 2000, margin: float = 0.0,
                         r_exclusion: float = EXCLUSION_RADIUS, local_radius: float | None = None,
                         rng=0, local_radii=None) -> SupportReport:
    """Sampled test that the tangent plane at ``q`` meets the closure only at ``q``.

    Every sample farther than ``r_exclusion`` from ``q`` must have negative
    offset; samples within ``local_radius`` (all samples when None) must also
    satisfy ``offset < -margin * |s - q|^2``.  When ``local_radius`` is given
    only samples inside it are used at all, which turns the global statement
    into a local one.
    """
    bp = q if isinstance(q, BoundaryPoint) else BoundaryPoint.at(domain, q)
    rng = np.random.default_rng(rng)
    parts = [domain.sample_boundary(n_samples, rng), domain.sample_interior(max(n_samples // 2, 1), rng),
             local_support_samples(domain, bp, local_radii)]
    S = np.concatenate(parts)
    diff = to_real(S) - to_real(bp.point)
    dist = np.linalg.norm(diff, axis=1)
    keep = dist > r_exclusion
    if local_radius is not None:
        keep &= dist < local_radius
    S, diff, dist = S[keep], diff[keep], dist[keep]
    off = diff @ bp.normal
    ratio = off / dist**2
    bad = off >= 0
    if local_radius is None and margin > 0:
        bad |= (ratio >= -margin) & (dist < 0.1)
    elif margin > 0:
        bad |= ratio >= -margin
    if S.shape[0] == 0:
        return SupportReport(True, -np.inf, -np.inf, None, 0)
    i = int(np.argmax(off))
    w = S[int(np.argmax(np.where(bad, 1.0, 0.0) + off))] if bad.any() else None
    return SupportReport(not bool(bad.any()), float(off[i]), float(ratio.max()), w, int(S.shape[0]))


@dataclass(frozen=True)
class ScanReport:
    radius: float
    passed: bool
    history: list = field(default_factory=list)


def uniform_support_scan(domain: DomainSpec, xi, radius: float, n_points: int = 6,
                         n_samples: int = 1000, iterations: int = 6, rng=0) -> ScanReport:
    """Largest radius (by bisection) at which sampled boundary points pass
    :func:`strict_support_check`."""
    xi = np.asarray(xi, dtype=np.complex128)
    rng = np.random.default_rng(rng)
    pool = domain.sample_boundary(20000, rng)
    history = []

    def ok(r):
        d = np.linalg.norm(pool - xi, axis=1)
        cand = pool[d < r]
        pts = [xi] + list(cand[rng.permutation(len(cand))[:n_points]])
        for p in pts:
            try:
                rep = strict_support_check(domain, p, n_samples=n_samples, rng=rng)
            except ValueError:
                return False
            if not rep.passed:
                return False
        return True

    if not ok(radius):
        history.append((radius, False))
        lo, hi = 0.0, radius
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            good = ok(mid)
            history.append((mid, good))
            if good:
                lo = mid
            else:
                hi = mid
        return ScanReport(lo, lo > 0, history)
    history.append((radius, True))
    return ScanReport(radius, True, history)


# ---------------------------------------------------------------------------
# approach sequences


@dataclass
class ApproachSequence:
    """Interior points approaching ``base`` with tangential displacement
    ``O(sqrt(dist))``."""

    base: BoundaryPoint
    points: np.ndarray
    C: float
    distances: np.ndarray
    tangent: np.ndarray | None = None
    schedule: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.points)


def _tangential_norm(bp: BoundaryPoint, z) -> float:
    v = to_real(np.asarray(z)) - to_real(bp.point)
    return float(np.linalg.norm(v - np.dot(v, bp.normal) * bp.normal))


def paraboloidal_sequence(domain: DomainSpec, p, C: float, schedule, samples=None,
                          max_pull: int = 200) -> ApproachSequence:
    """``z = p - s n + C sqrt(t) tau`` for each ``t``; ``s`` starts at ``t``
    and grows by 25% until ``z`` is interior and satisfies the constant ``C``.

    Raises
    ------
    ValueError
        If ``C < 0`` or the schedule is not strictly decreasing and positive.
    """
    t = np.asarray(schedule, dtype=float)
    if C < 0:
        raise ValueError("C must be nonnegative")
    if t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) >= 0):
        raise ValueError("schedule must be positive and strictly decreasing")
    bp = p if isinstance(p, BoundaryPoint) else BoundaryPoint.at(domain, p)
    tau = tangent_direction(bp.normal)
    if samples is None:
        samples = domain.sample_boundary(4000, 0)
    pts, dists = [], []
    q = to_real(bp.point)
    for tv in t:
        s = tv
        for _ in range(max_pull):
            z = to_complex(q - s * bp.normal + C * np.sqrt(tv) * tau)
            if domain.contains(z[None, :])[0]:
                d = project_to_boundary(domain, z, samples=samples).distance
                if _tangential_norm(bp, z) <= C * np.sqrt(d) * (1 + 1e-6) + 1e-12:
                    break
            s *= 1.25
        else:
            raise RuntimeError(f"could not place a sequence point for t = {tv}")
        pts.append(z)
        dists.append(d)
    pts_arr, d_arr = np.array(pts), np.array(dists)
    if np.any(np.diff(d_arr) >= 0):
        raise RuntimeError("distances to the boundary are not strictly decreasing")
    return ApproachSequence(bp, pts_arr, float(C), d_arr, tau, t)


def sequence_from_points(domain: DomainSpec, p, points, C: float, samples=None) -> ApproachSequence:
    """Wrap user-supplied interior points as an :class:`ApproachSequence`."""
    bp = p if isinstance(p, BoundaryPoint) else BoundaryPoint.at(domain, p)
    pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
    if samples is None:
        samples = domain.sample_boundary(4000, 0)
    d = np.array([project_to_boundary(domain, z, samples=samples).distance for z in pts])
    return ApproachSequence(bp, pts, float(C), d)


@dataclass(frozen=True)
class ParaboloidalValidation:
    min_C: float
    passed: bool
    ratios: np.ndarray


def validate_paraboloidal(seq: ApproachSequence) -> ParaboloidalValidation:
    """``max_nu |pi_p(z_nu - p)| / sqrt(dist(z_nu))`` against the declared ``C``."""
    if len(seq) == 0:
        raise ValueError("empty sequence")
    ratios = np.array([_tangential_norm(seq.base, z) / np.sqrt(d) for z, d in zip(seq.points, seq.distances)])
    m = float(ratios.max())
    return ParaboloidalValidation(m, m <= seq.C * (1 + 1e-6) + 1e-9, ratios)


# ---------------------------------------------------------------------------
# well-convexifiability


@dataclass(frozen=True)
class ConvexifiabilityReport:
    reduced_point: np.ndarray
    in_weak_locus: bool | None
    g_convex: bool | None
    g_min_eigenvalue: float | None
    local_strict_convexity: bool
    global_support: bool
    details: dict

    @property
    def passed(self) -> bool:
        parts = [self.local_strict_convexity, self.global_support]
        parts += [v for v in (self.in_weak_locus, self.g_convex) if v is not None]
        return all(parts)

    @property
    def failed_part(self) -> str | None:
        for name, v in (("i", self.in_weak_locus), ("ii", self.g_convex),
                        ("iii", self.local_strict_convexity), ("iv", self.global_support)):
            if v is False:
                return name
        return None


def well_convexifiable_check(domain: DomainSpec, p, ball_radius: float = 0.3, n_grid: int = 9,
                             n_local: int = 8, n_samples: int = 2000, rng=0) -> ConvexifiabilityReport:
    """Composite convexifiability check at ``p``.

    For egg domains ``p`` is mapped by the unshearing map and a rotation of
    ``w`` to ``(0, -1)`` on the unsheared domain.  Then (ii) the graph
    function is tested for convexity on a ball, (iii) boundary points near
    the reduced point are tested for local strict support, and (iv) the
    tangent plane at the reduced point is tested against the whole closure.
    Other domains skip (i) and (ii).

    Raises
    ------
    ValueError
        If an egg-domain point is not in the weak locus.
    """
    from .domains import egg_psi, unshear

    p = np.asarray(p, dtype=np.complex128)
    details: dict = {}
    in_locus = g_ok = g_min = None
    target_domain = domain
    q = p
    if domain.kind in ("egg", "omega"):
        omega = unshear(domain) if domain.kind == "egg" else domain
        img = egg_psi(domain)(p[None, :])[0] if domain.kind == "egg" else p
        in_locus = abs(img[0]) < 1e-9 and abs(abs(img[1]) - 1.0) < 1e-9
        if not in_locus:
            raise ValueError("p is not in the weakly pseudoconvex locus")
        theta = np.angle(-1.0 / img[1])
        q = np.array([img[0], np.exp(1j * theta) * img[1]])
        details["theta"] = float(theta)
        target_domain = omega
        sigma = omega.defining.sigma  # type: ignore[attr-defined]
        g = np.linspace(-ball_radius, ball_radius, n_grid)
        X, Y, V = np.meshgrid(g, g, g, indexing="ij")
        mask = X**2 + Y**2 + V**2 <= ball_radius**2
        eigs = [np.linalg.eigvalsh(graph_function_g(sigma, complex(x, y), v).hessian).min()
                for x, y, v in zip(X[mask], Y[mask], V[mask])]
        g_min = float(np.min(eigs))
        g_ok = g_min >= -1e-9
    rng = np.random.default_rng(rng)
    pool = target_domain.sample_boundary(20000, rng)
    near = pool[np.linalg.norm(pool - q, axis=1) < ball_radius]
    local_pts = [q] + list(near[rng.permutation(len(near))[:n_local]])
    local_ok = True
    for qq in local_pts:
        rep = strict_support_check(target_domain, qq, n_samples=n_samples, local_radius=ball_radius, rng=rng)
        if not rep.passed:
            local_ok = False
            details["local_witness"] = qq
            break
    glob = strict_support_check(target_domain, q, n_samples=n_samples, rng=rng)
    details["global_worst_offset"] = glob.worst_offset
    return ConvexifiabilityReport(q, in_locus, g_ok, g_min, local_ok, glob.passed, details)


def weak_point(domain: DomainSpec) -> np.ndarray:
    return weak_locus_point(domain)
