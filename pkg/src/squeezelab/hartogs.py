"""Hartogs domains ``D_n = {|w| < exp(-V(z))}`` over the polydisc.

``V = exp(phi)`` with ``phi`` a weighted sum of ``log`` distances to a
countable grid accumulating at the torus; the grid is truncated at
``k_max`` and the discarded weight is carried as a tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np
from scipy import ndimage

from . import kernels


@dataclass(frozen=True)
class GridSet:
    """Points ``(1-1/k) exp(2 pi i m_j / k^2)``, ``2 <= k <= k_max``, in
    lexicographic ``(k, m_1, ..., m_n)`` order."""

    n: int
    k_max: int
    points: np.ndarray = field(repr=False)
    levels: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.points)


def grid_set(n: int, k_max: int) -> GridSet:
    """Enumerate the grid.

    Raises
    ------
    ValueError
        If ``k_max < 2`` or ``n < 1``.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    pts, lev = [], []
    for k in range(2, k_max + 1):
        roots = (1.0 - 1.0 / k) * np.exp(2j * np.pi * np.arange(1, k * k + 1) / (k * k))
        idx = np.array(list(product(range(k * k), repeat=n)), dtype=np.intp)
        pts.append(roots[idx])
        lev.append(np.full(len(idx), k))
    return GridSet(n, k_max, np.vstack(pts), np.concatenate(lev))


def grid_count(n: int, k_max: int) -> int:
    return sum(k ** (2 * n) for k in range(2, k_max + 1))


@dataclass(frozen=True)
class HartogsSpec:
    """The domain ``D_n`` with weights ``lambda_nu = 2^-nu`` (``nu >= 2``)."""

    n: int
    grid: GridSet = field(repr=False)
    weights: np.ndarray = field(repr=False)
    tail: float

    @property
    def scale(self) -> float:
        return 2.0 * np.sqrt(self.n - 1)

    @property
    def n_terms(self) -> int:
        return len(self.weights)

    def to_record(self) -> dict:
        return {"n": self.n, "k_max": self.grid.k_max, "weights": "2^-nu"}


def hartogs_spec(n: int = 2, k_max: int | None = None, n_terms: int | None = None) -> HartogsSpec:
    """Build ``D_n``; ``k_max`` defaults to 20 for ``n = 2`` and 8 otherwise.

    ``n_terms`` truncates the grid further (used for stability checks).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if k_max is None:
        k_max = 20 if n == 2 else 8
    grid = grid_set(n - 1, k_max)
    N = len(grid) if n_terms is None else min(int(n_terms), len(grid))
    if N < len(grid):
        grid = GridSet(grid.n, grid.k_max, grid.points[:N], grid.levels[:N])
    weights = 2.0 ** -np.arange(2, N + 2, dtype=float)
    # sum over nu > N+1 of 2^-nu times the sup of |log(||z-a||/2 sqrt(n-1))| on D(0,1/4)^(n-1)
    tail = 2.0 ** -(N + 1) * np.log(8.0 * np.sqrt(n - 1))
    return HartogsSpec(n, grid, weights, float(tail))


@dataclass(frozen=True)
class Potential:
    value: np.ndarray
    neg_inf: np.ndarray
    tail: float


def potential_phi(spec: HartogsSpec, z) -> Potential:
    """``phi(z) = sum lambda_nu log(||z - a_nu|| / 2 sqrt(n-1))`` over stored points.

    Values at grid points are ``-inf`` and flagged in ``neg_inf``.
    """
    z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
    if z.shape[1] != spec.n - 1:
        z = z.reshape(-1, spec.n - 1)
    val, hit = kernels.log_potential(z, spec.grid.points, spec.weights, spec.scale)
    return Potential(val, hit, spec.tail)


def V(spec: HartogsSpec, z) -> np.ndarray:
    """``exp(phi)``; zero at grid points."""
    return np.exp(potential_phi(spec, z).value)


@dataclass(frozen=True)
class Membership:
    V: float
    radius: float
    classification: str
    neg_inf: bool


def membership(spec: HartogsSpec, z, w, band: float | None = None) -> Membership:
    """Classify ``(z, w)`` against ``D_n``.

    The ambiguous band around ``|w| = exp(-V(z))`` is the tail bound
    propagated through ``exp(-exp(.))`` plus ``1e-12``.

    Raises
    ------
    ValueError
        If ``z`` is outside the unit polydisc.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("z is outside the unit polydisc")
    pot = potential_phi(spec, z[None, :])
    v = float(np.exp(pot.value[0]))
    radius = float(np.exp(-v))
    if band is None:
        band = radius * v * np.expm1(spec.tail) + 1e-12
    aw = abs(complex(w))
    if aw < radius - band:
        cls = "inside"
    elif aw > radius + band:
        cls = "outside"
    else:
        cls = "boundary"
    return Membership(v, radius, cls, bool(pot.neg_inf[0]))


def sample_base(spec: HartogsSpec, count: int, rng=None, avoid: float = 1e-6) -> np.ndarray:
    """Area-uniform points of the polydisc base away from grid points."""
    rng = np.random.default_rng(rng)
    m = spec.n - 1
    out = np.empty((0, m), dtype=np.complex128)
    while len(out) < count:
        k = count - len(out)
        z = np.sqrt(rng.uniform(0, 1, (k, m))) * np.exp(2j * np.pi * rng.uniform(0, 1, (k, m)))
        z = z[np.all(np.abs(z) < 1.0, axis=1)]
        d = np.array([np.min(np.linalg.norm(spec.grid.points - p, axis=1)) for p in z]) if len(z) < 2000 else _min_dist(spec, z)
        out = np.vstack([out, z[d > avoid]])
    return out[:count]


def _min_dist(spec: HartogsSpec, z: np.ndarray) -> np.ndarray:
    out = np.empty(len(z))
    for s in range(0, len(z), 512):
        blk = z[s:s + 512]
        out[s:s + 512] = np.sqrt(np.min(np.sum(np.abs(blk[:, None, :] - spec.grid.points[None]) ** 2, axis=2), axis=1))
    return out


def omega_point(spec: HartogsSpec, z, theta: float) -> np.ndarray:
    """The point ``(z, exp(-V(z)) e^{i theta})`` of ``omega_n``."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    r = np.exp(-V(spec, z[None, :])[0])
    return np.concatenate([z, [r * np.exp(1j * theta)]])


def omega_surface_samples(spec: HartogsSpec, count: int, rng=None, zero_fraction: float = 0.05) -> np.ndarray:
    """Points of ``omega_n = {|w| = exp(-V(z))}``.

    Base points are stratified in radius and angle; a fraction of the
    samples sits on the slice ``z = 0``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(rng)
    m = spec.n - 1
    n0 = max(1, int(round(zero_fraction * count))) if count > 1 else 1
    n1 = count - n0
    if n1 > 0:
        if m == 1:
            # stratified area-uniform cells in (r^2, arg)
            u = (np.arange(n1) + rng.uniform(0, 1, n1)) / n1
            v = rng.permutation(n1) / n1 + rng.uniform(0, 1.0 / n1, n1)
            z = (np.sqrt(u) * np.exp(2j * np.pi * v))[:, None]
            z = np.where(np.abs(z) < 1.0, z, z * (1 - 1e-9))
            bad = _min_dist(spec, z) <= 1e-6
            if bad.any():
                z[bad] = sample_base(spec, int(bad.sum()), rng)
        else:
            z = sample_base(spec, n1, rng)
        base = np.vstack([z, np.zeros((n0, m), dtype=np.complex128)])
    else:
        base = np.zeros((n0, m), dtype=np.complex128)
    r = np.exp(-V(spec, base))
    w = r * np.exp(2j * np.pi * rng.uniform(0, 1, len(base)))
    return np.column_stack([base, w])


# ---------------------------------------------------------------------------
# plurisubharmonicity and separation


@dataclass(frozen=True)
class PshReport:
    minimum: float
    argmin: np.ndarray
    passed: bool
    fd_error: float


def _fd_hessian_phi(spec: HartogsSpec, z: np.ndarray, h: float = 1e-5) -> np.ndarray:
    m = len(z)
    E = np.eye(m)

    def f(p):
        return float(potential_phi(spec, p[None, :]).value[0])

    H = np.zeros((m, m), dtype=np.complex128)
    for j in range(m):
        for k in range(m):
            def d2(u, v):
                return (f(z + h * u + h * v) - f(z + h * u - h * v) - f(z - h * u + h * v) + f(z - h * u - h * v)) / (4 * h * h)
            H[j, k] = 0.25 * (d2(E[j], E[k]) + d2(1j * E[j], 1j * E[k])
                              + 1j * (d2(E[j], 1j * E[k]) - d2(1j * E[j], E[k])))
    return H


def psh_scan(spec: HartogsSpec, grid=None, count: int = 1000, rng=0, tol: float = 1e-7,
             weights: np.ndarray | None = None, n_fd: int = 3) -> PshReport:
    """Smallest complex-Hessian eigenvalue of ``phi`` over ``grid``.

    ``weights`` overrides the stored weights (for sign-flip checks).
    """
    if grid is None:
        grid = sample_base(spec, count, rng, avoid=1e-4)
    grid = np.atleast_2d(np.asarray(grid, dtype=np.complex128))
    w = spec.weights if weights is None else np.asarray(weights, dtype=float)
    mins = np.array([np.linalg.eigvalsh(kernels.log_potential_hessian(z, spec.grid.points, w)).min()
                     for z in grid])
    i = int(np.argmin(mins))
    fd = 0.0
    if weights is None:
        for z in grid[:n_fd]:
            A = kernels.log_potential_hessian(z, spec.grid.points, w)
            fd = max(fd, float(np.abs(A - _fd_hessian_phi(spec, z)).max()))
    return PshReport(float(mins[i]), grid[i], bool(mins[i] >= -tol), fd)


@dataclass(frozen=True)
class SeparationReport:
    components: int
    passed: bool
    resolution: float
    tube: float


def locally_separating_check(spec: HartogsSpec, p, radius: float = 0.1, res: int = 17,
                             tube: float | None = None) -> SeparationReport:
    """Connected components of ``ball(p, radius)`` minus a tube around ``omega_n``.

    Raises
    ------
    ValueError
        If ``p`` is not on ``omega_n`` or the ball leaves the base polydisc.
    """
    p = np.asarray(p, dtype=np.complex128)
    m = spec.n - 1
    if np.any(np.abs(p[:m]) + radius >= 1.0):
        raise ValueError("ball leaves the base polydisc")
    if membership(spec, p[:m], p[-1], band=1e-9).classification != "boundary":
        raise ValueError("p is not on omega_n")
    dim = 2 * spec.n
    ax = np.linspace(-radius, radius, res)
    h = ax[1] - ax[0]
    mesh = np.stack(np.meshgrid(*([ax] * dim), indexing="ij"), axis=-1)
    off = mesh[..., 0::2] + 1j * mesh[..., 1::2]
    pts = (p + off).reshape(-1, spec.n)
    in_ball = (np.linalg.norm(mesh, axis=-1) <= radius)
    rho = (np.abs(pts[:, -1]) - np.exp(-V(spec, pts[:, :m]))).reshape(in_ball.shape)
    grads = np.gradient(rho, h)
    gnorm = np.sqrt(sum(g * g for g in grads))
    dist = np.abs(rho) / np.maximum(gnorm, 1e-12)
    if tube is None:
        tube = 0.5 * h * np.sqrt(dim)
    free = in_ball & (dist > tube)
    _, count = ndimage.label(free)
    return SeparationReport(int(count), count >= 2, float(h), float(tube))


# ---------------------------------------------------------------------------
# sup-norm test on the grid


@dataclass(frozen=True)
class SupNormReport:
    passed: bool
    witness: np.ndarray | None
    grid_max: float
    torus_bound: float
    torus_max: float
    n_grid: int


def _apply(f: Callable, pts: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(f(pts))
        if out.shape == (len(pts),):
            return out
    except Exception:
        pass
    return np.array([f(p) for p in pts])


def sup_norm_test(f: Callable, n: int, k_max: int, sup_norm: float, torus_samples: int = 4096,
                  rng=0) -> SupNormReport:
    """Grid check ``|f(a)| <= 1`` and the Cauchy torus bound ``1 + pi n |f| / k``.

    ``f`` maps an ``(m, n)`` array of points to ``m`` values (or one point
    to one value).
    """
    if not np.isfinite(sup_norm):
        raise ValueError("sup norm must be finite")
    g = grid_set(n, k_max)
    vals = np.abs(_apply(f, g.points))
    bad = np.flatnonzero(vals > 1.0 + 1e-12)
    rng = np.random.default_rng(rng)
    r = 1.0 - 1.0 / k_max
    T = r * np.exp(2j * np.pi * rng.uniform(0, 1, (torus_samples, n)))
    tmax = float(np.abs(_apply(f, T)).max())
    bound = 1.0 + np.pi * n * sup_norm / k_max
    return SupNormReport(bad.size == 0, g.points[bad[0]] if bad.size else None, float(vals.max()),
                         float(bound), tmax, len(g))
