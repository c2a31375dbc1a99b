import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from squeezelab import _pykernels, kernels

ck = pytest.importorskip("squeezelab._ckernels")


@given(st.integers(0, 10_000))
def test_poly_eval_parity(seed):
    rng = np.random.default_rng(seed)
    alpha = rng.integers(0, 4, (7, 2)).astype(np.int64)
    beta = rng.integers(0, 4, (7, 2)).astype(np.int64)
    c = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    pts = rng.standard_normal((30, 2)) + 1j * rng.standard_normal((30, 2))
    a = _pykernels.poly_eval(alpha, beta, c, pts)
    b = ck.poly_eval(alpha, beta, c, pts)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@given(st.integers(0, 10_000))
def test_log_potential_parity(seed):
    rng = np.random.default_rng(seed)
    anchors = rng.standard_normal((20, 2)) + 1j * rng.standard_normal((20, 2))
    w = rng.uniform(0, 1, 20)
    pts = np.vstack([rng.standard_normal((10, 2)) + 1j * rng.standard_normal((10, 2)), anchors[:1]])
    va, ha = _pykernels.log_potential(pts, anchors, w, 2.0)
    vb, hb = ck.log_potential(pts, anchors, w, 2.0)
    assert np.array_equal(ha, hb) and ha[-1]
    assert np.allclose(va[~ha], vb[~hb], rtol=1e-12)
    assert np.isneginf(vb[-1])
    Ha = _pykernels.log_potential_hessian(pts[0], anchors, w)
    Hb = ck.log_potential_hessian(pts[0], anchors, w)
    assert np.allclose(Ha, Hb, rtol=1e-12, atol=1e-14)


@given(st.integers(0, 10_000))
def test_polydisc_distance_parity(seed):
    rng = np.random.default_rng(seed)
    z = 0.9 * np.exp(2j * np.pi * rng.uniform(0, 1, 2)) * rng.uniform(0, 1, 2)
    s = 0.9 * np.exp(2j * np.pi * rng.uniform(0, 1, (15, 2))) * rng.uniform(0, 1, (15, 2))
    assert np.allclose(_pykernels.polydisc_distances(z, s), ck.polydisc_distances(z, s), rtol=1e-12)


def test_backend_selection_env():
    env = dict(os.environ, SQUEEZELAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from squeezelab import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND == "cython"
