"""Backend selection for the numerical hot loops.

The compiled Cython module is used when it was built and importable; the
numpy fallback is used otherwise, or when ``SQUEEZELAB_PURE_PYTHON=1``.
Both expose the same four functions with identical semantics.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SQUEEZELAB_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

poly_eval = _impl.poly_eval
log_potential = _impl.log_potential
log_potential_hessian = _impl.log_potential_hessian
polydisc_distances = _impl.polydisc_distances

__all__ = [
    "BACKEND",
    "poly_eval",
    "log_potential",
    "log_potential_hessian",
    "polydisc_distances",
]
