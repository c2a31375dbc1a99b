"""Radial profiles ``sigma(t)`` and ``phi(x)`` with their first two derivatives.

Profiles serialize by name plus parameters because arbitrary callables do
not.  The built-in names are ``pow``, ``pow4``, ``pow4_bump`` and ``poly``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

Array = np.ndarray


@dataclass(frozen=True)
class RadialProfile:
    """A C^2 function on ``[0, 1 + eps)`` given with its derivatives.

    Parameters
    ----------
    value, d1, d2 : callable
        Vectorised ``f``, ``f'`` and ``f''``.
    eps : float
        Overshoot of the domain of definition beyond 1.
    label : str
        Registry name used for serialization.
    params : mapping
        Parameters that rebuild the profile from ``label``.
    poly_coeffs : tuple of float, optional
        Ascending coefficients when the profile is a polynomial.
    """

    value: Callable[[Array], Array]
    d1: Callable[[Array], Array]
    d2: Callable[[Array], Array]
    eps: float = 0.1
    label: str = "custom"
    params: Mapping = field(default_factory=dict)
    poly_coeffs: tuple | None = None

    def __call__(self, t):
        return self.value(np.asarray(t, dtype=float))

    def derivative_consistency(self, grid=None, rel: float = 1e-5) -> tuple[bool, float]:
        """Compare central differences of ``value``/``d1`` against ``d1``/``d2``.

        Returns the verdict and the worst relative error.
        """
        if grid is None:
            grid = np.linspace(0.05, 1.0 + 0.9 * self.eps, 200)
        x = np.asarray(grid, dtype=float)
        h = 1e-6
        worst = 0.0
        for f, df in ((self.value, self.d1), (self.d1, self.d2)):
            fd = (f(x + h) - f(x - h)) / (2 * h)
            exact = df(x)
            scale = np.maximum(1.0, np.abs(exact))
            worst = max(worst, float(np.max(np.abs(fd - exact) / scale)))
        return worst <= rel, worst

    def to_record(self) -> dict:
        return {"name": self.label, "params": dict(self.params)}


def polynomial(coeffs, eps: float = 0.1, label: str = "poly") -> RadialProfile:
    """Profile ``sum_k coeffs[k] * t**k``."""
    c = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    d1, d2 = c.deriv(1), c.deriv(2)
    return RadialProfile(
        value=lambda t: c(np.asarray(t, dtype=float)),
        d1=lambda t: d1(np.asarray(t, dtype=float)),
        d2=lambda t: d2(np.asarray(t, dtype=float)),
        eps=eps,
        label=label,
        params={"coeffs": [float(v) for v in coeffs]},
        poly_coeffs=tuple(float(v) for v in coeffs),
    )


def power(k: int, eps: float = 0.1) -> RadialProfile:
    """``t**k``."""
    coeffs = [0.0] * k + [1.0]
    p = polynomial(coeffs, eps=eps)
    return RadialProfile(p.value, p.d1, p.d2, eps, "pow", {"k": int(k)}, p.poly_coeffs)


def pow4(eps: float = 0.1) -> RadialProfile:
    p = power(4, eps)
    return RadialProfile(p.value, p.d1, p.d2, eps, "pow4", {}, p.poly_coeffs)


def _bump(t, t0, w):
    """``exp(-1/(1-s^2))`` with ``s = (t-t0)/w`` and its t-derivatives."""
    t = np.asarray(t, dtype=float)
    s = (t - t0) / w
    inside = np.abs(s) < 1.0
    b = np.zeros_like(t)
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    si = s[inside]
    q = 1.0 - si * si
    e = np.exp(-1.0 / q)
    bs = e * (-2.0 * si / q**2)
    bss = e * (4.0 * si**2 / q**4 - 2.0 / q**2 - 8.0 * si**2 / q**3)
    b[inside] = e
    b1[inside] = bs / w
    b2[inside] = bss / w**2
    return b, b1, b2


def pow4_bump(t0: float = 0.6, width: float = 0.4, c: float = 0.3, eps: float = 0.1) -> RadialProfile:
    """``(t**4 + c*bump(t)) / (1 + c*bump(1))``.

    The smooth bump centred at ``t0`` breaks convexity of ``x -> sigma(x^2)``
    while keeping ``sigma`` increasing and ``x sigma'' + sigma'`` positive for
    ``c`` in a window around the default.
    """
    norm = 1.0 + c * float(_bump(np.array([1.0]), t0, width)[0][0])

    def value(t):
        t = np.asarray(t, dtype=float)
        return (t**4 + c * _bump(t, t0, width)[0]) / norm

    def d1(t):
        t = np.asarray(t, dtype=float)
        return (4 * t**3 + c * _bump(t, t0, width)[1]) / norm

    def d2(t):
        t = np.asarray(t, dtype=float)
        return (12 * t**2 + c * _bump(t, t0, width)[2]) / norm

    return RadialProfile(value, d1, d2, eps, "pow4_bump",
                         {"t0": t0, "width": width, "c": c})


_REGISTRY = {
    "pow": lambda eps=0.1, k=4: power(k, eps),
    "pow4": lambda eps=0.1: pow4(eps),
    "pow4_bump": lambda eps=0.1, **kw: pow4_bump(eps=eps, **kw),
    "poly": lambda eps=0.1, coeffs=(0.0, 0.0, 1.0): polynomial(coeffs, eps),
}


def from_record(record: Mapping, eps: float = 0.1) -> RadialProfile:
    """Rebuild a built-in profile from ``{"name": ..., "params": {...}}``."""
    name = record["name"]
    if name not in _REGISTRY:
        raise KeyError(f"unknown profile {name!r}; known: {sorted(_REGISTRY)}")
    return _REGISTRY[name](eps=eps, **dict(record.get("params", {})))


SHIPPED_SIGMA = {"name": "pow4_bump", "params": {"t0": 0.6, "width": 0.4, "c": 0.3}}


def shipped_sigma(eps: float = 0.1) -> RadialProfile:
    """The profile satisfying all five egg-domain conditions."""
    return from_record(SHIPPED_SIGMA, eps)
