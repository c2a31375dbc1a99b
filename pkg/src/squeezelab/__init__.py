"""Numerical laboratory for squeezing functions of explicit domains in C^n.

Submodules
----------
polyalg
    Mixed polynomials and Wirtinger calculus.
domains
    Defining functions, egg domains and canonical models.
boundary
    Projection, Levi forms, support checks and approach sequences.
kobayashi
    Kobayashi distances and analytic-disc chains.
squeeze
    Lower and upper bounds for the squeezing function.
scaling
    The rescaling pipeline along approach sequences.
hartogs
    Hartogs domains over the polydisc and a grid test for sup norms.
"""

from .kernels import BACKEND
from .polyalg import MixedPolynomial, complex_hessian
from .profiles import RadialProfile, shipped_sigma
from .domains import DomainSpec, build_egg_domain, canonical_model, monomial_model, unit_ball, unit_polydisc
from .squeeze import BoundReport, hhr_lower_bound, removal_upper_bound, hartogs_upper_bound

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "MixedPolynomial",
    "complex_hessian",
    "RadialProfile",
    "shipped_sigma",
    "DomainSpec",
    "build_egg_domain",
    "canonical_model",
    "monomial_model",
    "unit_ball",
    "unit_polydisc",
    "BoundReport",
    "hhr_lower_bound",
    "removal_upper_bound",
    "hartogs_upper_bound",
]
