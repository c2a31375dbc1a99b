"""Mixed polynomials in z and zbar with Wirtinger calculus.

A :class:`MixedPolynomial` in ``n`` complex variables stores a finite table
of coefficients ``c[alpha, beta]`` for monomials ``z**alpha * conj(z)**beta``.
Every defining function, rescaled boundary and limit polynomial handled by
this package is represented this way.

Values are immutable; every operation returns a new polynomial and prunes
coefficients below ``1e-14 * max|c|`` so that term maps stay canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels

PRUNE_RELATIVE = 1e-14
REAL_TOLERANCE = 1e-12

MultiIndex = tuple[int, ...]
TermKey = tuple[MultiIndex, MultiIndex]


def _add_idx(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def _prune(terms: dict, rel: float = PRUNE_RELATIVE) -> dict:
    if not terms:
        return terms
    cmax = max(abs(c) for c in terms.values())
    if cmax == 0.0:
        return {}
    cut = rel * cmax
    return {k: complex(c) for k, c in terms.items() if abs(c) > cut}


class MixedPolynomial:
    """Finitely supported sum of ``c[alpha, beta] z^alpha zbar^beta``.

    Parameters
    ----------
    dimension : int
        Number of complex variables ``n``.
    terms : mapping, optional
        ``{(alpha, beta): coefficient}`` with ``alpha``/``beta`` tuples of
        length ``n``.
    prune : bool
        Drop coefficients below the relative pruning threshold.
    """

    __array_priority__ = 100

    def __init__(self, dimension: int, terms: Mapping[TermKey, complex] | None = None,
                 prune: bool = True):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self._n = int(dimension)
        clean: dict[TermKey, complex] = {}
        for (alpha, beta), c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            beta = tuple(int(b) for b in beta)
            if len(alpha) != self._n or len(beta) != self._n:
                raise ValueError("multi-index length does not match dimension")
            if min(alpha + beta) < 0:
                raise ValueError("negative exponent")
            if c != 0:
                key = (alpha, beta)
                clean[key] = clean.get(key, 0.0) + complex(c)
        self._terms = _prune(clean) if prune else {k: v for k, v in clean.items() if v != 0}

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "MixedPolynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, c: complex) -> "MixedPolynomial":
        z = (0,) * n
        return cls(n, {(z, z): c})

    @classmethod
    def monomial(cls, alpha: Sequence[int], beta: Sequence[int], c: complex = 1.0) -> "MixedPolynomial":
        return cls(len(alpha), {(tuple(alpha), tuple(beta)): c})

    @classmethod
    def variable(cls, n: int, j: int, conjugated: bool = False) -> "MixedPolynomial":
        """The coordinate ``z_j`` (or ``conj(z_j)``), 0-based ``j``."""
        e = tuple(1 if k == j else 0 for k in range(n))
        z = (0,) * n
        return cls(n, {(z, e) if conjugated else (e, z): 1.0})

    @classmethod
    def real_part_of(cls, n: int, j: int) -> "MixedPolynomial":
        return 0.5 * (cls.variable(n, j) + cls.variable(n, j, True))

    @classmethod
    def imag_part_of(cls, n: int, j: int) -> "MixedPolynomial":
        return (cls.variable(n, j) - cls.variable(n, j, True)) * (-0.5j)

    @classmethod
    def abs_squared(cls, n: int, j: int, power: int = 1) -> "MixedPolynomial":
        """``|z_j|^(2*power)``."""
        e = tuple(power if k == j else 0 for k in range(n))
        return cls(n, {(e, e): 1.0})

    @classmethod
    def from_records(cls, n: int, records: Iterable[Mapping]) -> "MixedPolynomial":
        terms: dict[TermKey, complex] = {}
        for r in records:
            key = (tuple(r["alpha"]), tuple(r["beta"]))
            terms[key] = terms.get(key, 0.0) + complex(float(r.get("re", 0.0)), float(r.get("im", 0.0)))
        return cls(n, terms)

    def to_records(self) -> list[dict]:
        return [
            {"alpha": list(a), "beta": list(b), "re": c.real, "im": c.imag}
            for (a, b), c in sorted(self._terms.items())
        ]

    # -- basic properties -------------------------------------------------
    @property
    def dimension(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[TermKey, complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def coefficient(self, alpha: Sequence[int], beta: Sequence[int]) -> complex:
        return self._terms.get((tuple(alpha), tuple(beta)), 0j)

    @property
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(a) + sum(b) for a, b in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    @cached_property
    def is_real(self) -> bool:
        """True iff ``c[beta, alpha] == conj(c[alpha, beta])`` for every term."""
        scale = max(1.0, self.max_abs_coefficient())
        for (a, b), c in self._terms.items():
            partner = self._terms.get((b, a), 0j)
            if abs(partner - np.conj(c)) > REAL_TOLERANCE * scale:
                return False
        return True

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "MixedPolynomial":
        if isinstance(other, MixedPolynomial):
            if other._n != self._n:
                raise ValueError("dimension mismatch")
            return other
        if np.isscalar(other):
            return MixedPolynomial.constant(self._n, complex(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0.0) + c
        return MixedPolynomial(self._n, out)

    __radd__ = __add__

    def __neg__(self):
        return MixedPolynomial(self._n, {k: -c for k, c in self._terms.items()}, prune=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return MixedPolynomial(self._n, {k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[TermKey, complex] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (_add_idx(a1, a2), _add_idx(b1, b2))
                out[key] = out.get(key, 0.0) + c1 * c2
        return MixedPolynomial(self._n, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __pow__(self, k: int):
        if k < 0 or int(k) != k:
            raise ValueError("only non-negative integer powers")
        result = MixedPolynomial.constant(self._n, 1.0)
        base = self
        k = int(k)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MixedPolynomial):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self):
        return hash((self._n, frozenset(self._terms.items())))

    def max_coefficient_difference(self, other: "MixedPolynomial") -> float:
        keys = set(self._terms) | set(other._terms)
        return max((abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) for k in keys), default=0.0)

    def conjugate(self) -> "MixedPolynomial":
        return MixedPolynomial(self._n, {(b, a): np.conj(c) for (a, b), c in self._terms.items()}, prune=False)

    def real_part(self) -> "MixedPolynomial":
        return 0.5 * (self + self.conjugate())

    def __repr__(self) -> str:
        if not self._terms:
            return f"MixedPolynomial({self._n}, 0)"
        parts = []
        for (a, b), c in sorted(self._terms.items()):
            parts.append(f"({c:.6g})z^{a}zb^{b}")
        return f"MixedPolynomial({self._n}, " + " + ".join(parts) + ")"

    # -- evaluation -------------------------------------------------------
    @cached_property
    def _arrays(self):
        keys = sorted(self._terms)
        alpha = np.array([k[0] for k in keys], dtype=np.int64).reshape(len(keys), self._n)
        beta = np.array([k[1] for k in keys], dtype=np.int64).reshape(len(keys), self._n)
        coeffs = np.array([self._terms[k] for k in keys], dtype=np.complex128)
        return np.ascontiguousarray(alpha), np.ascontiguousarray(beta), coeffs

    def __call__(self, point) -> complex:
        return evaluate(self, point)

    def eval_many(self, points) -> np.ndarray:
        """Vectorised evaluation at the rows of an ``(N, n)`` array."""
        pts = np.asarray(points, dtype=np.complex128)
        if pts.ndim != 2 or pts.shape[1] != self._n:
            raise ValueError(f"points must have shape (N, {self._n})")
        alpha, beta, coeffs = self._arrays
        return kernels.poly_eval(alpha, beta, coeffs, pts)

    # -- calculus ---------------------------------------------------------
    def wirtinger(self, j: int, conjugated: bool = False) -> "MixedPolynomial":
        out: dict[TermKey, complex] = {}
        for (a, b), c in self._terms.items():
            e = b if conjugated else a
            if e[j] == 0:
                continue
            lowered = tuple(x - 1 if k == j else x for k, x in enumerate(e))
            key = (a, lowered) if conjugated else (lowered, b)
            out[key] = out.get(key, 0.0) + c * e[j]
        return MixedPolynomial(self._n, out)

    @cached_property
    def _mixed_second(self) -> list[list["MixedPolynomial"]]:
        return [[self.wirtinger(j).wirtinger(k, conjugated=True) for k in range(self._n)]
                for j in range(self._n)]

    @cached_property
    def _gradient_polys(self) -> list["MixedPolynomial"]:
        return [self.wirtinger(j) for j in range(self._n)]

    def complex_gradient(self, point) -> np.ndarray:
        """``(dp/dz_1, ..., dp/dz_n)`` at ``point``."""
        return np.array([evaluate(g, point) for g in self._gradient_polys])

    # -- structural filters ----------------------------------------------
    def filter(self, keep) -> "MixedPolynomial":
        return MixedPolynomial(self._n, {k: c for k, c in self._terms.items() if keep(*k)}, prune=False)

    def homogeneous_component(self, k: int) -> "MixedPolynomial":
        if k < 0:
            raise ValueError("degree must be >= 0")
        return self.filter(lambda a, b: sum(a) + sum(b) == k)

    def truncate(self, max_degree: int) -> "MixedPolynomial":
        return self.filter(lambda a, b: sum(a) + sum(b) <= max_degree)

    def pluriharmonic_part(self) -> "MixedPolynomial":
        return self.filter(lambda a, b: sum(a) == 0 or sum(b) == 0)

    def min_degree(self) -> int:
        if not self._terms:
            return -1
        return min(sum(a) + sum(b) for a, b in self._terms)

    # -- composition ------------------------------------------------------
    def substitute(self, images: Sequence["MixedPolynomial"]) -> "MixedPolynomial":
        """Replace ``z_j`` by ``images[j]`` and ``conj(z_j)`` by its conjugate."""
        if len(images) != self._n:
            raise ValueError("need one image per variable")
        m = images[0].dimension
        if any(im.dimension != m for im in images):
            raise ValueError("images must share a dimension")
        conj_images = [im.conjugate() for im in images]
        cache: dict[tuple[int, int, bool], MixedPolynomial] = {}
        one = MixedPolynomial.constant(m, 1.0)

        def power(j: int, e: int, conj: bool) -> MixedPolynomial:
            if e == 0:
                return one
            key = (j, e, conj)
            if key not in cache:
                base = conj_images[j] if conj else images[j]
                cache[key] = base if e == 1 else power(j, e - 1, conj) * base
            return cache[key]

        out: dict[TermKey, complex] = {}
        for (a, b), c in self._terms.items():
            term = MixedPolynomial.constant(m, c)
            for j in range(self._n):
                if a[j]:
                    term = term * power(j, a[j], False)
                if b[j]:
                    term = term * power(j, b[j], True)
            for k, v in term._terms.items():
                out[k] = out.get(k, 0.0) + v
        return MixedPolynomial(m, out)


# ---------------------------------------------------------------------------
# operation-level API


def evaluate(p: MixedPolynomial, point) -> complex:
    """Value of ``p`` at a single point of ``C^n``."""
    z = np.atleast_1d(np.asarray(point, dtype=np.complex128))
    if z.shape != (p.dimension,):
        raise ValueError(f"point has dimension {z.size}, polynomial has {p.dimension}")
    if p.is_zero():
        return 0j
    alpha, beta, coeffs = p._arrays
    mono = np.prod(z[None, :] ** alpha * np.conj(z)[None, :] ** beta, axis=1)
    return complex(mono @ coeffs)


def wirtinger_derivative(p: MixedPolynomial, j: int, conjugated: bool = False) -> MixedPolynomial:
    """``dp/dz_j`` or ``dp/dzbar_j`` (0-based ``j``), exact term by term."""
    if not 0 <= j < p.dimension:
        raise IndexError("variable index out of range")
    return p.wirtinger(j, conjugated)


def complex_hessian(p: MixedPolynomial, point) -> np.ndarray:
    """Matrix ``H[j, k] = d^2 p / dz_j dzbar_k`` at ``point``.

    Raises
    ------
    ValueError
        If ``p`` is not real-valued.
    """
    if not p.is_real:
        raise ValueError("complex Hessian requires a real-valued polynomial")
    n = p.dimension
    H = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            H[j, k] = evaluate(p._mixed_second[j][k], point)
    return H


def pluriharmonic_part(p: MixedPolynomial) -> MixedPolynomial:
    """Holomorphic plus antiholomorphic terms (``alpha == 0`` or ``beta == 0``)."""
    return p.pluriharmonic_part()


def homogeneous_component(p: MixedPolynomial, k: int) -> MixedPolynomial:
    return p.homogeneous_component(k)


def compose_affine(p: MixedPolynomial, matrix, shift=None) -> MixedPolynomial:
    """``p(M x + c)`` expanded as a polynomial in ``x``.

    Raises
    ------
    ValueError
        If ``M`` is singular or the shapes do not match.
    """
    M = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
    n = p.dimension
    if M.shape != (n, n):
        raise ValueError("linear part must be n x n")
    if abs(np.linalg.det(M)) < 1e-14 * max(1.0, np.abs(M).max()) ** n:
        raise ValueError("affine map is singular")
    c = np.zeros(n, dtype=np.complex128) if shift is None else np.asarray(shift, dtype=np.complex128)
    images = []
    zero = (0,) * n
    for j in range(n):
        terms = {}
        for k in range(n):
            if M[j, k] != 0:
                e = tuple(1 if i == k else 0 for i in range(n))
                terms[(e, zero)] = M[j, k]
        if c[j] != 0:
            terms[(zero, zero)] = c[j]
        images.append(MixedPolynomial(n, terms, prune=False))
    return p.substitute(images)


@dataclass(frozen=True)
class SubharmonicityReport:
    minimum: float
    argmin: complex
    subharmonic: bool


def unit_disc_grid(radial: int = 40, angular: int = 64, radius: float = 1.0) -> np.ndarray:
    """Polar grid of the closed disc, including the centre."""
    r = np.linspace(0.0, radius, radial + 1)[1:]
    th = np.linspace(0.0, 2 * np.pi, angular, endpoint=False)
    pts = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
    return np.concatenate([[0j], pts])


def subharmonicity_scan(p: MixedPolynomial, grid=None) -> SubharmonicityReport:
    """Minimum of the Laplacian ``4 d^2p/dz dzbar`` of a one-variable ``p``."""
    if p.dimension != 1:
        raise ValueError("subharmonicity scan is for one complex variable")
    if not p.is_real:
        raise ValueError("polynomial must be real-valued")
    pts = unit_disc_grid() if grid is None else np.asarray(grid, dtype=np.complex128).ravel()
    lap = 4.0 * p._mixed_second[0][0].eval_many(pts[:, None]).real
    i = int(np.argmin(lap))
    m = float(lap[i])
    tol = 1e-12 * max(1.0, p.max_abs_coefficient())
    return SubharmonicityReport(m, complex(pts[i]), m >= -tol)
