"""Kobayashi distances: exact ball and polydisc formulas, affine-disc chain
upper bounds on general domains, and Sibony-type metric lower bounds."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize
from scipy.spatial import cKDTree

from . import kernels
from .domains import DomainSpec

SHRINK = 1.0 - 1e-6
RIM_ANGLES = 64
RIM_RADII = 8
REFINE_ANGLES = 512


def _vec(z) -> np.ndarray:
    return np.atleast_1d(np.asarray(z, dtype=np.complex128))


def _poincare(u0: complex, u1: complex) -> float:
    if abs(u0) >= 1.0 or abs(u1) >= 1.0:
        return np.inf
    num = abs(u0 - u1)
    den = abs(1.0 - u0 * np.conj(u1))
    if den == 0.0:
        return np.inf
    r = num / den
    return float(np.arctanh(r)) if r < 1.0 else np.inf


def ball_distance(z, w) -> float:
    """Kobayashi distance of the unit ball, ``atanh |phi_z(w)|``.

    Raises
    ------
    ValueError
        If a point is not in the open unit ball.
    """
    z, w = _vec(z), _vec(w)
    nz, nw = float(np.vdot(z, z).real), float(np.vdot(w, w).real)
    if nz >= 1.0 or nw >= 1.0:
        raise ValueError("points must lie in the open unit ball")
    inner = np.vdot(z, w)  # <w, z> = sum w_j conj(z_j)
    den = abs(1.0 - inner) ** 2
    s = 1.0 - (1.0 - nz) * (1.0 - nw) / den
    return float(np.arctanh(np.sqrt(min(max(s, 0.0), 1.0))))


def ball_distances(z, samples) -> np.ndarray:
    """Vectorised :func:`ball_distance` from ``z`` to each row of ``samples``."""
    z = _vec(z)
    S = np.atleast_2d(np.asarray(samples, dtype=np.complex128))
    nz = float(np.vdot(z, z).real)
    ns = np.sum(np.abs(S) ** 2, axis=1)
    inner = S @ np.conj(z)
    s = 1.0 - (1.0 - nz) * (1.0 - ns) / np.abs(1.0 - inner) ** 2
    with np.errstate(divide="ignore"):
        return np.arctanh(np.sqrt(np.clip(s, 0.0, 1.0)))


def scaled_ball_distance(z, w, center, radius) -> float:
    c = _vec(center)
    return ball_distance((_vec(z) - c) / radius, (_vec(w) - c) / radius)


def polydisc_distance(z, w) -> float:
    """``max_j atanh |(z_j - w_j) / (1 - z_j conj(w_j))|``.

    Raises
    ------
    ValueError
        If a point is outside the open unit polydisc.
    """
    z, w = _vec(z), _vec(w)
    if np.any(np.abs(z) >= 1.0) or np.any(np.abs(w) >= 1.0):
        raise ValueError("points must lie in the open unit polydisc")
    return float(kernels.polydisc_distances(z, w[None, :])[0])


def ball_metric(z, v) -> float:
    """Infinitesimal Kobayashi metric of the unit ball."""
    z, v = _vec(z), _vec(v)
    nz = float(np.vdot(z, z).real)
    return float(np.sqrt((1 - nz) * np.vdot(v, v).real + abs(np.vdot(z, v)) ** 2) / (1 - nz))


# ---------------------------------------------------------------------------
# disc chains


@dataclass(frozen=True)
class Leg:
    """Affine disc ``lambda -> center + lambda * direction``, ``|lambda| < radius``.

    ``lam0`` and ``lam1`` are the disc parameters of the two waypoints.
    """

    center: np.ndarray
    direction: np.ndarray
    radius: float
    lam0: complex
    lam1: complex
    length: float


@dataclass
class DiscChain:
    waypoints: list
    legs: list = field(default_factory=list)

    @property
    def length(self) -> float:
        return float(sum(leg.length for leg in self.legs))

    def concatenate(self, other: "DiscChain") -> "DiscChain":
        if not np.allclose(self.waypoints[-1], other.waypoints[0], atol=1e-12):
            raise ValueError("chains do not share an endpoint")
        return DiscChain(self.waypoints + other.waypoints[1:], self.legs + other.legs)


@dataclass(frozen=True)
class KobayashiEstimate:
    lower: float
    upper: float
    witness: object = None
    tag: str = "chain"


def _disc_grid(n_angles: int, n_radii: int) -> np.ndarray:
    th = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    r = np.arange(1, n_radii + 1) / n_radii
    return (r[:, None] * th[None, :]).ravel()


_COARSE = _disc_grid(RIM_ANGLES, RIM_RADII)
_GRID = np.concatenate([_COARSE, _disc_grid(REFINE_ANGLES, 1)])


def _disc_inside(domain: DomainSpec, c: np.ndarray, b: np.ndarray, R: float, grid=_GRID) -> bool:
    pts = c[None, :] + (R * grid)[:, None] * b[None, :]
    return bool(np.all(domain.contains(pts)))


def _reach(domain: DomainSpec) -> float:
    if domain.enclosing_ball is not None:
        return 2.0 * float(domain.enclosing_ball[1])
    return float(np.linalg.norm(domain.box[1] - domain.box[0]))


def max_disc_radius(domain: DomainSpec, c, b, iterations: int = 40, lo: float = 0.0,
                    coarse: bool = False) -> float:
    """Largest sampled-certified radius of the disc at ``c`` in direction ``b``.

    ``lo`` is a radius already known to be admissible (warm start).  The
    certificate uses a 64 x 8 polar grid plus 512 rim angles; ``coarse``
    drops the rim refinement (used only while searching for the centre).
    """
    c, b = _vec(c), _vec(b)
    if not domain.contains(c[None, :])[0]:
        return 0.0
    grid = _COARSE if coarse else _GRID
    hi = _reach(domain)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if _disc_inside(domain, c, b, mid, grid):
            lo = mid
        else:
            hi = mid
    return lo * SHRINK


def _leg_length(x, d, mu, R):
    if R <= 0:
        return np.inf
    return _poincare(-mu / R, (d - mu) / R)


def best_leg(domain: DomainSpec, x, y, iterations: int = 40) -> Leg:
    """Shortest single affine-disc leg from ``x`` to ``y`` in their complex line."""
    x, y = _vec(x), _vec(y)
    diff = y - x
    d = float(np.linalg.norm(diff))
    if d == 0.0:
        return Leg(x, np.zeros_like(x), np.inf, 0j, 0j, 0.0)
    b = diff / d

    def cost(p):
        mu = complex(p[0], p[1])
        R = max_disc_radius(domain, x + mu * b, b, min(iterations, 32), coarse=True)
        return min(_leg_length(x, d, mu, R), 1e6)

    starts = [complex(0.5 * d, 0.0)]
    if domain.enclosing_ball is not None:
        mu_c = complex(np.vdot(b, _vec(domain.enclosing_ball[0]) - x))
        if abs(mu_c - starts[0]) > 1e-9:
            starts.append(mu_c)
    best = None
    for s in starts:
        simplex = np.array([[s.real, s.imag], [s.real + 0.1 * d, s.imag], [s.real, s.imag + 0.1 * d]])
        res = optimize.minimize(cost, [s.real, s.imag], method="Nelder-Mead",
                                options={"xatol": 1e-8 * d, "fatol": 1e-13, "initial_simplex": simplex,
                                         "maxiter": 400})
        if best is None or res.fun < best.fun:
            best = res
    mu = complex(best.x[0], best.x[1])
    c = x + mu * b
    R = max_disc_radius(domain, c, b, iterations)
    return Leg(c, b, R, -mu, d - mu, _leg_length(x, d, mu, R))


def reevaluate_leg(domain: DomainSpec, leg: Leg, iterations: int = 40) -> Leg:
    """Re-maximise a stored leg's radius in ``domain`` (warm start at its radius)."""
    if leg.length == 0.0:
        return leg
    lo = leg.radius if _disc_inside(domain, leg.center, leg.direction, leg.radius) else 0.0
    R = max_disc_radius(domain, leg.center, leg.direction, iterations, lo=lo / SHRINK if lo else 0.0)
    R = max(R, lo)
    return Leg(leg.center, leg.direction, R, leg.lam0, leg.lam1,
               _poincare(leg.lam0 / R, leg.lam1 / R) if R > 0 else np.inf)


def reevaluate_chain(domain: DomainSpec, chain: DiscChain, iterations: int = 40) -> DiscChain:
    return DiscChain(list(chain.waypoints), [reevaluate_leg(domain, leg, iterations) for leg in chain.legs])


@dataclass
class ChainResult:
    upper: float
    chain: DiscChain | None
    diagnostic: str = ""
    evaluated_legs: int = 0


def disc_chain_upper(domain: DomainSpec, z, w, budget: int = 40, n_nodes: int = 200, k: int = 8,
                     rng=0, warm_start=(), max_legs: int = 400) -> ChainResult:
    """Upper bound on the Kobayashi distance by chains of affine discs.

    Waypoints are ``z``, ``w`` and ``n_nodes`` random interior points joined
    to their ``k`` nearest neighbours (plus the direct edge ``z``-``w``).
    The shortest chain is found by lazy A* whose heuristic, the exact
    distance in an enclosing ball, never exceeds the true cost.
    ``warm_start`` chains from ``z`` to ``w`` are re-evaluated in ``domain``
    and compete with the search result.
    """
    z, w = _vec(z), _vec(w)
    if not (domain.contains(z[None, :])[0] and domain.contains(w[None, :])[0]):
        raise ValueError("endpoints must be interior")
    if np.array_equal(z, w):
        return ChainResult(0.0, DiscChain([z, w], []), "coincident")

    if domain.enclosing_ball is not None:
        c0, r0 = domain.enclosing_ball

        def h(p):
            return scaled_ball_distance(p, w, c0, r0 * (1 + 1e-12))

        def lb(p, q):
            return scaled_ball_distance(p, q, c0, r0 * (1 + 1e-12))
    else:
        def h(p):
            return 0.0

        def lb(p, q):
            return 0.0

    nodes = [z, w] + list(domain.sample_interior(n_nodes, rng)) if n_nodes else [z, w]
    P = np.array(nodes)
    tree = cKDTree(np.column_stack([P.real, P.imag]))
    _, nbr = tree.query(np.column_stack([P.real, P.imag]), k=min(k + 1, len(P)))
    adj: dict[int, set] = {i: set() for i in range(len(P))}
    for i, row in enumerate(nbr):
        for j in np.atleast_1d(row):
            if j != i:
                adj[i].add(int(j))
                adj[int(j)].add(i)
    adj[0].add(1)
    adj[1].add(0)

    hv = [h(p) for p in P]
    legs: dict[tuple, Leg] = {}
    g = {0: 0.0}
    parent: dict[int, tuple] = {}
    # entries: (f, tie, node, via, evaluated)
    heap = [(hv[0], 0, 0, -1, True)]
    tie = 1
    closed = set()
    evaluated = 0
    while heap:
        f, _, node, via, done = heapq.heappop(heap)
        if not done:
            key = (min(via, node), max(via, node))
            if key not in legs:
                if evaluated >= max_legs:
                    continue
                legs[key] = best_leg(domain, P[via], P[node], budget)
                evaluated += 1
            cost = g[via] + legs[key].length
            if cost < g.get(node, np.inf) and node not in closed:
                g[node] = cost
                parent[node] = (via, key)
                heapq.heappush(heap, (cost + hv[node], tie, node, via, True))
                tie += 1
            continue
        if node in closed or f - hv[node] > g.get(node, np.inf) + 1e-15:
            continue
        closed.add(node)
        if node == 1:
            break
        for j in adj[node]:
            if j in closed:
                continue
            key = (min(node, j), max(node, j))
            est = legs[key].length if key in legs else lb(P[node], P[j])
            heapq.heappush(heap, (g[node] + est + hv[j], tie, j, node, False))
            tie += 1

    best = ChainResult(np.inf, None, "no chain found within budget", evaluated)
    if 1 in closed:
        path, legs_out = [1], []
        cur = 1
        while cur != 0:
            via, key = parent[cur]
            leg = legs[key]
            if key[0] != via:  # stored in the opposite orientation
                leg = Leg(leg.center, leg.direction, leg.radius, leg.lam1, leg.lam0, leg.length)
            legs_out.append(leg)
            path.append(via)
            cur = via
        chain = DiscChain([P[i] for i in reversed(path)], list(reversed(legs_out)))
        best = ChainResult(chain.length, chain, "", evaluated)
    for ch in warm_start:
        re = reevaluate_chain(domain, ch, budget)
        if re.length < best.upper:
            best = ChainResult(re.length, re, "warm start", evaluated)
    return best


def distance_to_set_upper(domain: DomainSpec, z, targets, budget: int = 40, boundary_adjacent: bool = False,
                          offset: float = 1e-3, max_chains: int = 20, **chain_kw) -> tuple[float, int]:
    """Upper bound on ``K(z, targets)``; returns ``(value, index of best target)``.

    Exact formulas are used on the unit ball and polydisc.  Elsewhere chains
    are run to the targets in order of an enclosing-ball lower bound until
    that bound exceeds the best value found.
    """
    T = np.atleast_2d(np.asarray(targets, dtype=np.complex128))
    if T.shape[0] == 0:
        raise ValueError("empty target set")
    z = _vec(z)
    if boundary_adjacent:
        from .boundary import BoundaryPoint
        from .domains import to_complex, to_real

        moved = []
        for t in T:
            n = BoundaryPoint.at(domain, t, tol=1e-6).normal
            moved.append(to_complex(to_real(t) - offset * n))
        T = np.array(moved)
    if domain.kind == "ball" and domain.params.get("n") == T.shape[1]:
        d = ball_distances(z, T)
        i = int(np.argmin(d))
        return float(d[i]), i
    if domain.kind == "polydisc":
        d = kernels.polydisc_distances(z, T)
        i = int(np.argmin(d))
        return float(d[i]), i
    if domain.enclosing_ball is not None:
        c0, r0 = domain.enclosing_ball
        lbs = np.array([scaled_ball_distance(z, t, c0, r0) for t in T])
    else:
        lbs = np.zeros(len(T))
    order = np.argsort(lbs)
    best, bi = np.inf, -1
    for count, i in enumerate(order):
        if lbs[i] >= best or count >= max_chains:
            break
        r = disc_chain_upper(domain, z, T[i], budget, **chain_kw)
        if r.upper < best:
            best, bi = r.upper, int(i)
    return float(best), bi


# ---------------------------------------------------------------------------
# Sibony lower bound


@dataclass(frozen=True)
class SibonyWitness:
    """Negative psh ``u`` with ``<v, H_u(z) v> >= c |v|^2``.

    ``alpha`` is the universal constant of the bound; its value is not known,
    so every number derived from a witness is conditional on it.
    """

    u: Callable[[np.ndarray], float]
    hessian: Callable[[np.ndarray], np.ndarray]
    c: float
    alpha: float = 1.0

    @classmethod
    def from_polynomial(cls, p, c: float, alpha: float = 1.0) -> "SibonyWitness":
        from . import polyalg

        return cls(lambda z: float(polyalg.evaluate(p, z).real),
                   lambda z: polyalg.complex_hessian(p, z), c, alpha)

    def check(self, z, n_directions: int = 50, rng=0, domain: DomainSpec | None = None,
              n_domain: int = 2000) -> list[str]:
        problems = []
        z = _vec(z)
        if not self.u(z) < 0:
            problems.append("u(z) >= 0")
        H = self.hessian(z)
        rng = np.random.default_rng(rng)
        V = rng.standard_normal((n_directions, z.size)) + 1j * rng.standard_normal((n_directions, z.size))
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        q = np.einsum("ij,jk,ik->i", V, H, np.conj(V)).real
        if np.any(q < self.c * (1 - 1e-12)):
            problems.append("Hessian lower bound violated")
        if domain is not None:
            S = domain.sample_interior(n_domain, rng)
            if any(self.u(s) >= 0 for s in S):
                problems.append("u is not negative on the domain")
        return problems


@dataclass(frozen=True)
class SibonyBound:
    value: float
    conditional_on_alpha: bool = True


def sibony_metric_lower(z, v, witness: SibonyWitness, domain: DomainSpec | None = None) -> SibonyBound:
    """``(c/alpha)^(1/2) |v| / |u(z)|^(1/2)``, conditional on ``alpha``.

    Raises
    ------
    ValueError
        If ``u(z) >= 0`` or the Hessian bound fails at ``z``.
    """
    problems = witness.check(z, domain=domain)
    if problems:
        raise ValueError("; ".join(problems))
    uz = witness.u(_vec(z))
    return SibonyBound(float(np.sqrt(witness.c / witness.alpha) * np.linalg.norm(_vec(v)) / np.sqrt(abs(uz))))
