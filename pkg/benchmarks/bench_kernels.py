"""Compare the compiled kernels with the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``.  Each kernel is timed on
identical inputs under both backends and the outputs are checked to agree.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from squeezelab import _pykernels

try:
    from squeezelab import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _inputs(rng):
    n_terms, n_pts = 40, 20_000
    alpha = rng.integers(0, 4, size=(n_terms, 2)).astype(np.int64)
    beta = rng.integers(0, 4, size=(n_terms, 2)).astype(np.int64)
    coeffs = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    pts = (rng.standard_normal((n_pts, 2)) + 1j * rng.standard_normal((n_pts, 2))) * 0.5
    anchors = (rng.uniform(0.3, 0.9, (2869, 1)) * np.exp(2j * np.pi * rng.uniform(0, 1, (2869, 1))))
    weights = 2.0 ** -np.arange(2, 2871, dtype=float)
    zs = 0.3 * (rng.standard_normal((2000, 1)) + 1j * rng.standard_normal((2000, 1)))
    samples = 0.9 * np.exp(2j * np.pi * rng.uniform(0, 1, (50_000, 2)))
    return {
        "poly_eval": ((alpha, beta, coeffs, pts),),
        "log_potential": ((zs, anchors, weights, 2.0),),
        "log_potential_hessian": ((zs[0], anchors, weights),),
        "polydisc_distances": ((np.array([0.1 + 0.2j, -0.3j]), samples),),
    }


def _first(out):
    return out[0] if isinstance(out, tuple) else out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    cases = _inputs(np.random.default_rng(0))
    print(f"{'kernel':<24}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}{'max diff':>12}")
    for name, (call_args,) in cases.items():
        py = getattr(_pykernels, name)
        t_py = min(timeit.repeat(lambda: py(*call_args), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:<24}{1e3 * t_py:>14.2f}{'n/a':>14}")
            continue
        cy = getattr(_ckernels, name)
        t_cy = min(timeit.repeat(lambda: cy(*call_args), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(np.asarray(_first(py(*call_args))) - np.asarray(_first(cy(*call_args))))))
        print(f"{name:<24}{1e3 * t_py:>14.2f}{1e3 * t_cy:>14.2f}{t_py / t_cy:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
