"""Squeezing-function bounds.

Lower bounds come from an explicit embedding ``F = Phi o L o Lambda`` built
from an extremal frame at the query point; upper bounds come from
Kobayashi distances to a removed compact set or to the singular surface of
a Hartogs domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import linalg, optimize

from . import kernels
from .boundary import ApproachSequence, project_to_boundary
from .domains import DomainSpec, egg_psi, to_complex, to_real, unshear
from .kobayashi import ball_distances, distance_to_set_upper


class ChainVerificationError(RuntimeError):
    """An embedding-chain postcondition failed; ``sample`` is the witness."""

    def __init__(self, message: str, sample=None):
        super().__init__(message)
        self.sample = sample


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class ExtremalFrame:
    """Base point ``w``, boundary points ``s[j]`` and unit vectors ``e[j]``."""

    w: np.ndarray
    s: np.ndarray
    e: np.ndarray
    radii: np.ndarray

    @classmethod
    def from_points(cls, w, s) -> "ExtremalFrame":
        w = np.asarray(w, dtype=np.complex128)
        s = np.atleast_2d(np.asarray(s, dtype=np.complex128))
        d = s - w[None, :]
        r = np.linalg.norm(d, axis=1)
        return cls(w, s, d / r[:, None], r)

    def orthonormality_error(self) -> float:
        G = self.e.conj() @ self.e.T
        return float(np.max(np.abs(G - np.eye(len(self.e)))))


def _exit_radii(domain: DomainSpec, base: np.ndarray, dirs: np.ndarray, reach: float,
                n_march: int = 256, n_bisect: int = 60) -> np.ndarray:
    """First exit distance from ``base`` along each unit complex direction."""
    dirs = np.atleast_2d(dirs)
    m, n = dirs.shape
    t = np.linspace(0.0, reach, n_march + 1)[1:]
    pts = base[None, None, :] + t[None, :, None] * dirs[:, None, :]
    inside = domain.contains(pts.reshape(-1, n)).reshape(m, n_march)
    first_out = np.where(~inside.all(axis=1), np.argmin(inside, axis=1), n_march - 1)
    hi = t[first_out]
    lo = np.where(first_out > 0, t[np.maximum(first_out - 1, 0)], 0.0)
    for _ in range(n_bisect):
        mid = 0.5 * (lo + hi)
        ok = domain.contains(base[None, :] + mid[:, None] * dirs)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return 0.5 * (lo + hi)


def _reach(domain: DomainSpec) -> float:
    if domain.enclosing_ball is not None:
        return 2.0 * float(domain.enclosing_ball[1])
    return float(np.linalg.norm(domain.box[1] - domain.box[0]))


def _slice_minimum(domain: DomainSpec, w: np.ndarray, B: np.ndarray, n_dirs: int, rng) -> np.ndarray:
    """Nearest boundary point to ``w`` within ``w + span(B)``."""
    k = B.shape[1]
    reach = _reach(domain)
    if k == 1:
        th = 2 * np.pi * np.arange(n_dirs) / n_dirs
        dirs = np.exp(1j * th)[:, None] * B[:, 0][None, :]
        r = _exit_radii(domain, w, dirs, reach)
        i = int(np.argmin(r))
        h = 2 * np.pi / n_dirs

        def f(t):
            return float(_exit_radii(domain, w, (np.exp(1j * t) * B[:, 0])[None, :], reach)[0])

        res = optimize.minimize_scalar(f, bounds=(th[i] - h, th[i] + h), method="bounded",
                                       options={"xatol": 1e-10})
        t_best = res.x if res.fun <= r[i] else th[i]
        y = np.exp(1j * t_best) * B[:, 0]
        return w + f(t_best) * y
    Y = rng.standard_normal((n_dirs, k)) + 1j * rng.standard_normal((n_dirs, k))
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    r = _exit_radii(domain, w, Y @ B.T, reach)
    y0 = Y[int(np.argmin(r))]

    def g(x):
        y = x[:k] + 1j * x[k:]
        y = y / np.linalg.norm(y)
        return float(_exit_radii(domain, w, (B @ y)[None, :], reach)[0])

    res = optimize.minimize(g, np.concatenate([y0.real, y0.imag]), method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14})
    y = res.x[:k] + 1j * res.x[k:]
    y /= np.linalg.norm(y)
    return w + g(res.x) * (B @ y)


def extremal_frame(domain: DomainSpec, w, n_dirs: int = 72, samples=None, rng=0) -> ExtremalFrame:
    """Extremal frame at ``w``.

    ``s_1`` is the nearest boundary point; each later ``s_j`` is the nearest
    boundary point in the complex slice through ``w`` orthogonal to the
    previous directions.
    """
    w = np.asarray(w, dtype=np.complex128)
    if not domain.contains(w[None, :])[0]:
        raise ValueError("w must be interior")
    rng = np.random.default_rng(rng)
    n = domain.dimension
    s1 = project_to_boundary(domain, w, samples=samples, rng=rng).point.point
    s = [s1]
    E = [(s1 - w) / np.linalg.norm(s1 - w)]
    for _ in range(1, n):
        B = linalg.null_space(np.array(E).conj())
        sj = _slice_minimum(domain, w, B, n_dirs, rng)
        s.append(sj)
        E.append((sj - w) / np.linalg.norm(sj - w))
    frame = ExtremalFrame.from_points(w, np.array(s))
    if frame.orthonormality_error() > 1e-8:
        raise ChainVerificationError("extremal frame is not orthonormal")
    return frame


# ---------------------------------------------------------------------------
# the embedding chain


@dataclass(frozen=True)
class AffineMap:
    """``z -> M (z - base)``."""

    M: np.ndarray
    base: np.ndarray

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return (z - self.base) @ self.M.T

    def inverse(self, Z):
        Z = np.asarray(Z, dtype=np.complex128)
        return np.linalg.solve(self.M, np.atleast_2d(Z).T).T.reshape(Z.shape) + self.base


def lambda_map(frame: ExtremalFrame) -> AffineMap:
    """``Lambda(z) = sum_j <z - w, e_j> / |s_j - w| eps_j``."""
    return AffineMap(frame.e.conj() / frame.radii[:, None], frame.w)


@dataclass(frozen=True)
class TangentCoefficients:
    a: np.ndarray
    raw: np.ndarray
    upper_residual: float


def tangent_coefficients(domain: DomainSpec, frame: ExtremalFrame, lam: AffineMap | None = None,
                         tol: float = 1e-10) -> TangentCoefficients:
    """Rows ``a[j, :j+1]`` of the pushed-forward tangent planes at ``Lambda(s_j)``.

    Raises
    ------
    ChainVerificationError
        If some ``a[j, j]`` is not positive (degenerate tangency).
    """
    n = len(frame.s)
    raw = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        g = domain.defining.complex_gradient(frame.s[j])
        # d rho = 2 Re sum_k g_k dz_k and z - w = sum_m r_m Z_m e_m
        raw[j] = frame.radii * (frame.e @ g)
    a = np.zeros_like(raw)
    resid = 0.0
    for j in range(n):
        row = raw[j, : j + 1]
        if raw[j, j].real <= tol * np.abs(raw[j]).max():
            raise ChainVerificationError(
                f"a[{j + 1},{j + 1}] is not positive; the support regime a_jj >= 1/sqrt(n) is expected")
        nrm = np.linalg.norm(row)
        a[j, : j + 1] = row / nrm
        a[j, j] = a[j, j].real
        resid = max(resid, float(np.abs(raw[j, j + 1:]).max(initial=0.0) / nrm))
    return TangentCoefficients(a, raw, resid)


@dataclass
class EmbeddingChain:
    """``F = Phi o L o Lambda`` (optionally preceded by a biholomorphism ``pre``)."""

    frame: ExtremalFrame
    lam: AffineMap
    a: np.ndarray
    pre: Callable | None = None
    pre_inverse: Callable | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def diag(self) -> np.ndarray:
        return np.real(np.diag(self.a))

    def L(self, Z):
        return np.asarray(Z) @ self.a.T

    def Phi(self, Y):
        two_a = 2.0 * self.diag
        return Y / (two_a - Y)

    def __call__(self, z):
        z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
        if self.pre is not None:
            z = self.pre(z)
        return self.Phi(self.L(self.lam(z)))

    def inverse(self, xi):
        xi = np.atleast_2d(np.asarray(xi, dtype=np.complex128))
        Y = 2.0 * self.diag * xi / (1.0 + xi)
        Z = np.linalg.solve(self.a, Y.T).T
        z = self.lam.inverse(Z)
        if self.pre_inverse is not None:
            z = self.pre_inverse(z)
        return z

    def delta0(self) -> float:
        """Largest ``delta`` certified by ``|L^{-1}|_1`` with ``D(0, delta)^n`` inside ``L(Q)``."""
        M = np.linalg.inv(self.a)
        return float(1.0 / np.abs(M).sum())

    def delta0_sampled(self, count: int = 4096, rng=0) -> float:
        rng = np.random.default_rng(rng)
        n = self.a.shape[0]
        T = np.exp(2j * np.pi * rng.uniform(0, 1, (count, n)))
        M = np.linalg.inv(self.a)
        return float(1.0 / np.abs(T @ M.T).sum(axis=1).max())


def embedding_chain(domain: DomainSpec, w, samples=None, n_domain: int = 10_000, rng=0,
                    frame: ExtremalFrame | None = None, verify: bool = True) -> EmbeddingChain:
    """Build and verify the chain at ``w``.

    Raises
    ------
    ChainVerificationError
        With the violating sample when ``F(w) != 0``, ``Lambda(s_j) != eps_j``
        or a domain sample leaves the unit polydisc.
    """
    w = np.asarray(w, dtype=np.complex128)
    if frame is None:
        frame = extremal_frame(domain, w, samples=samples, rng=rng)
    lam = lambda_map(frame)
    tc = tangent_coefficients(domain, frame, lam)
    chain = EmbeddingChain(frame, lam, tc.a)
    n = domain.dimension
    chain.diagnostics["upper_residual"] = tc.upper_residual
    if not verify:
        return chain
    if np.max(np.abs(chain(w))) > 1e-10:
        raise ChainVerificationError("composite does not vanish at w", w)
    if np.max(np.abs(lam(frame.s) - np.eye(n))) > 1e-8:
        raise ChainVerificationError("Lambda(s_j) differs from the standard basis")
    S = domain.sample_interior(n_domain, rng)
    img = np.abs(chain(S))
    bad = np.flatnonzero(img.max(axis=1) >= 1.0)
    if bad.size:
        raise ChainVerificationError("domain sample maps outside the unit polydisc", S[bad[0]])
    # l1-ball check: Q inside Lambda(Omega) and the coefficient regime it implies
    rng_q = np.random.default_rng(rng)
    U = rng_q.standard_normal((2000, n)) + 1j * rng_q.standard_normal((2000, n))
    U *= (rng_q.uniform(0, 1, (2000, 1)) ** (1 / (2 * n))) / np.abs(U).sum(axis=1, keepdims=True)
    acorn = bool(np.all(domain.contains(lam.inverse(U))))
    chain.diagnostics["acorn_ok"] = acorn
    chain.diagnostics["key_coeffs_ok"] = bool(np.all(chain.diag >= 1 / np.sqrt(n) - 1e-6))
    if acorn and not chain.diagnostics["key_coeffs_ok"]:
        chain.diagnostics["precondition"] = "a_jj < 1/sqrt(n) although the l1-ball check passed"
    return chain


# ---------------------------------------------------------------------------
# inscribed radius and the lower bound


def _retract(domain: DomainSpec, x: np.ndarray, steps: int = 8) -> np.ndarray:
    """Newton steps along the gradient onto ``rho = 0``."""
    for _ in range(steps):
        z = to_complex(x)
        r = domain.defining(z)
        g = domain.defining.gradient(z)
        gg = float(np.dot(g, g))
        if gg == 0.0:
            break
        x = x - r * g / gg
        if abs(r) < 1e-15:
            break
    return x


def _refine_extreme(domain: DomainSpec, F: Callable, q0: np.ndarray, sign: float) -> float:
    """Local extremum of ``sign * |F(q)|`` over boundary points near ``q0``."""
    def obj(x):
        q = to_complex(_retract(domain, x))
        if not np.isfinite(q).all():
            return np.inf
        return sign * float(np.linalg.norm(F(q[None, :])[0]))

    x0 = to_real(q0)
    res = optimize.minimize(obj, x0, method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000,
                                     "initial_simplex": x0 + np.vstack([np.zeros(x0.size), 1e-3 * np.eye(x0.size)])})
    return sign * min(res.fun, obj(x0))


@dataclass(frozen=True)
class InscribedRadius:
    value: float
    sample_min: float
    refined_min: float
    ray_min: float
    n_samples: int
    warning: str = ""


def _ray_exit(chain: EmbeddingChain, domain: DomainSpec, U: np.ndarray, n_march: int = 200,
              n_bisect: int = 50) -> np.ndarray:
    """Exit radius of ``F(domain)`` along image-space unit directions ``U``."""
    m, n = U.shape
    smax = 1.0 / np.abs(U).max(axis=1)
    frac = np.linspace(0.0, 1.0, n_march + 1)[1:] * (1 - 1e-12)
    S = smax[:, None] * frac[None, :]
    pts = chain.inverse((S[:, :, None] * U[:, None, :]).reshape(-1, n))
    ins = domain.contains(pts).reshape(m, n_march)
    first = np.where(~ins.all(axis=1), np.argmin(ins, axis=1), n_march - 1)
    hi = S[np.arange(m), first]
    lo = np.where(first > 0, S[np.arange(m), np.maximum(first - 1, 0)], 0.0)
    for _ in range(n_bisect):
        mid = 0.5 * (lo + hi)
        ok = domain.contains(chain.inverse(mid[:, None] * U))
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


def inscribed_radius(chain: EmbeddingChain, domain: DomainSpec, boundary_samples, refine: bool = True,
                     n_rays: int = 512, rng=0) -> InscribedRadius:
    """Distance from 0 to the boundary of ``F(domain)``.

    The minimum of ``|F|`` over boundary samples is refined by a local search
    on the boundary, and cross-checked by casting rays from 0 in image space.
    """
    Q = np.atleast_2d(np.asarray(boundary_samples, dtype=np.complex128))
    warn = "fewer than 10^3 boundary samples" if len(Q) < 1000 else ""
    norms = np.linalg.norm(chain(Q), axis=1)
    i = int(np.argmin(norms))
    smin = float(norms[i])
    refined = smin
    if refine:
        qd = Q[i] if chain.pre is None else chain.pre(Q[i][None, :])[0]
        dom = domain if chain.pre is None else chain.diagnostics.get("image_domain", domain)
        F = chain if chain.pre is None else (lambda z: chain.Phi(chain.L(chain.lam(z))))
        refined = min(smin, _refine_extreme(dom, F, qd, +1.0))
    rng = np.random.default_rng(rng)
    n = Q.shape[1]
    U = rng.standard_normal((n_rays, n)) + 1j * rng.standard_normal((n_rays, n))
    u0 = chain(Q[i][None, :])[0]
    U = np.vstack([u0, U])
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    rays = _ray_exit(chain, domain, U)
    j = int(np.argmin(rays))

    def ray_obj(x):
        u = x[:n] + 1j * x[n:]
        nu = np.linalg.norm(u)
        if nu == 0:
            return np.inf
        return float(_ray_exit(chain, domain, (u / nu)[None, :])[0])

    x0 = np.concatenate([U[j].real, U[j].imag])
    res = optimize.minimize(ray_obj, x0, method="Nelder-Mead", options={"xatol": 1e-9, "fatol": 1e-13})
    ray_min = float(min(rays[j], res.fun))
    value = min(refined, ray_min)
    return InscribedRadius(value, smin, refined, ray_min, len(Q), warn)


@dataclass(frozen=True)
class LowerBound:
    value: float
    numeric: float
    inscribed: InscribedRadius
    outer_radius: float
    delta0: float
    delta0_sampled: float
    apriori: float
    apriori_sqrt_n: float
    chain: EmbeddingChain


def _outer_radius(chain: EmbeddingChain, domain: DomainSpec, Q: np.ndarray) -> float:
    """``sup |F|``: attained on the boundary since ``|F|^2`` is psh; capped by ``sqrt(n)``."""
    n = Q.shape[1]
    norms = np.linalg.norm(chain(Q), axis=1)
    i = int(np.argmax(norms))
    qd = Q[i] if chain.pre is None else chain.pre(Q[i][None, :])[0]
    dom = domain if chain.pre is None else chain.diagnostics.get("image_domain", domain)
    F = chain if chain.pre is None else (lambda z: chain.Phi(chain.L(chain.lam(z))))
    refined = max(float(norms[i]), _refine_extreme(dom, F, qd, -1.0))
    return float(min(np.sqrt(n), refined))


def hhr_lower_bound(domain: DomainSpec, z, n_boundary: int = 10_000, rng=0, n_domain: int = 10_000) -> LowerBound:
    """Squeezing lower bound at ``z`` from the embedding chain.

    For egg domains the chain is built on the unsheared domain at
    ``Psi(z)`` and composed with ``Psi``; boundary samples of the egg domain
    are pushed through the full composite.

    The returned value is the larger of the numeric bound
    ``inscribed / sup|F|`` and the a-priori constant ``delta0/((2+delta0) n)``.
    """
    z = np.asarray(z, dtype=np.complex128)
    rs = np.random.default_rng(rng)
    if domain.kind == "egg":
        omega = unshear(domain)
        psi = egg_psi(domain)
        P = domain.defining.P  # type: ignore[attr-defined]
        inner = embedding_chain(omega, psi(z[None, :])[0], n_domain=n_domain, rng=rng)
        chain = EmbeddingChain(inner.frame, inner.lam, inner.a, pre=psi,
                               pre_inverse=lambda x: np.column_stack([x[:, 0], x[:, 1] - P(x[:, 0])]),
                               diagnostics=dict(inner.diagnostics, image_domain=omega))
    else:
        chain = embedding_chain(domain, z, n_domain=n_domain, rng=rng)
    if not domain.contains(z[None, :])[0]:
        raise ValueError("z must be interior")
    Q = domain.sample_boundary(n_boundary, rs)
    ins = inscribed_radius(chain, domain, Q, rng=rng)
    R = _outer_radius(chain, domain, Q)
    n = domain.dimension
    d0 = chain.delta0()
    apriori = d0 / ((2 + d0) * n)
    numeric = ins.value / R
    value = max(numeric, apriori)
    return LowerBound(min(value, 1.0), numeric, ins, R, d0, chain.delta0_sampled(), apriori,
                      d0 / (2 + d0) / np.sqrt(n), chain)


# ---------------------------------------------------------------------------
# upper bounds


@dataclass(frozen=True)
class CompactBall:
    """Closed Euclidean ball ``K``; the removed set of the removal bound."""

    center: np.ndarray
    radius: float

    def contains(self, z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
        return np.linalg.norm(z - self.center, axis=1) <= self.radius

    def retract(self, x_real: np.ndarray) -> np.ndarray:
        z = to_complex(x_real)
        d = z - self.center
        nd = np.linalg.norm(d)
        return self.center + self.radius * (d / nd if nd > 0 else np.eye(len(d))[0])

    def boundary_samples(self, count: int, rng=None) -> np.ndarray:
        rng = np.random.default_rng(rng)
        n = len(self.center)
        g = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
        return self.center + self.radius * g / np.linalg.norm(g, axis=1, keepdims=True)


@dataclass
class BoundReport:
    """Lower and upper squeezing bounds at one point."""

    point: np.ndarray
    lower: float | None = None
    upper: float | None = None
    lower_witness: object = None
    upper_witness: object = None
    flags: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        for name in ("lower", "upper"):
            v = getattr(self, name)
            if v is not None and not (0.0 <= v <= 1.0 + 1e-12):
                self.diagnostics.append(f"{name} bound {v} outside [0, 1]")
        if self.lower is not None and self.upper is not None and self.lower > self.upper + 1e-12:
            self.diagnostics.append(f"lower bound {self.lower} exceeds upper bound {self.upper}")


def _local_min_over_set(fun, retract, x0: np.ndarray) -> float:
    res = optimize.minimize(lambda x: fun(retract(x)), x0, method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    return float(min(res.fun, fun(retract(x0))))


def removal_upper_bound(ambient: DomainSpec, K: CompactBall, z, n_samples: int = 4000, rng=0,
                        **chain_kw) -> BoundReport:
    """``tanh(K_ambient(z, dK))`` for ``D = ambient minus K``.

    Raises
    ------
    ValueError
        If ``z`` lies in ``K`` or outside the ambient domain.
    """
    z = np.asarray(z, dtype=np.complex128)
    if K.contains(z[None, :])[0]:
        raise ValueError("z lies in K")
    if not ambient.contains(z[None, :])[0]:
        raise ValueError("z is outside the ambient domain")
    rng = np.random.default_rng(rng)
    T = K.boundary_samples(n_samples, rng)
    seed = K.retract(to_real(z))
    T = np.vstack([seed, T])
    flags = {"sampled_certificate": True,
             "complement_connected": bool(ambient.contains(T).all() and ambient.dimension >= 2)}
    if ambient.kind in ("ball", "polydisc"):
        exact = ball_distances if ambient.kind == "ball" else kernels.polydisc_distances
        d = exact(z, T)
        i = int(np.argmin(d))
        dist = _local_min_over_set(lambda t: float(exact(z, t[None, :])[0]), K.retract, to_real(T[i]))
        flags["exact_formula"] = ambient.kind
    else:
        dist, _ = distance_to_set_upper(ambient, z, T, **chain_kw)
    return BoundReport(z, upper=float(np.tanh(dist)), upper_witness={"distance": dist}, flags=flags)


def hartogs_upper_bound(spec, z, samples=None, n_samples: int = 4000, rng=0, refine: bool = True) -> BoundReport:
    """``min(1, tanh(polydisc distance from z to omega samples))`` on ``D_n``.

    Raises
    ------
    ValueError
        If ``z`` is not in ``D_n``.
    """
    from .hartogs import membership, omega_surface_samples, omega_point

    z = np.asarray(z, dtype=np.complex128)
    if membership(spec, z[:-1], z[-1]).classification != "inside":
        raise ValueError("z is not in D_n")
    if samples is None:
        samples = omega_surface_samples(spec, n_samples, rng=rng)
    d = kernels.polydisc_distances(z, samples)
    i = int(np.argmin(d))
    dist = float(d[i])
    if refine:
        m = spec.n - 1
        x0 = np.concatenate([samples[i, :m].real, samples[i, :m].imag, [np.angle(samples[i, -1])]])

        def f(x):
            zz = x[:m] + 1j * x[m:2 * m]
            if np.any(np.abs(zz) >= 1):
                return np.inf
            p = omega_point(spec, zz, x[-1])
            return float(kernels.polydisc_distances(z, p[None, :])[0])

        res = optimize.minimize(f, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
        dist = min(dist, float(res.fun))
    return BoundReport(z, upper=float(min(1.0, np.tanh(dist))), upper_witness={"distance": dist},
                       flags={"sampled_certificate": True, "epsilon_limit": True})


@dataclass(frozen=True)
class Profile:
    reports: list
    slope: float


def squeeze_profile(mode: str, points, domain: DomainSpec | None = None, K: CompactBall | None = None,
                    spec=None, **kw) -> Profile:
    """Bounds along a sequence; ``slope`` is the least-squares trend of the
    bound against the index."""
    if isinstance(points, ApproachSequence):
        points = points.points
    pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
    if mode == "hhr-lower":
        if domain is None:
            raise ValueError("hhr-lower needs a domain")
        reps = []
        for p in pts:
            lb = hhr_lower_bound(domain, p, **kw)
            reps.append(BoundReport(p, lower=lb.value, lower_witness=lb,
                                    flags={"sampled_certificate": True}))
        vals = [r.lower for r in reps]
    elif mode == "removal-upper":
        if domain is None or K is None:
            raise ValueError("removal-upper needs an ambient domain and K")
        reps = [removal_upper_bound(domain, K, p, **kw) for p in pts]
        vals = [r.upper for r in reps]
    elif mode == "hartogs-upper":
        if spec is None:
            raise ValueError("hartogs-upper needs a Hartogs spec")
        reps = [hartogs_upper_bound(spec, p, **kw) for p in pts]
        vals = [r.upper for r in reps]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    slope = float(np.polyfit(np.arange(len(vals)), vals, 1)[0]) if len(vals) > 1 else 0.0
    return Profile(reps, slope)
