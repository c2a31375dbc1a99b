"""Pure numpy implementations of the hot loops.

Mirrors ``_ckernels.pyx`` function for function; selected automatically
when the compiled extension is unavailable.
"""

import numpy as np


def poly_eval(alpha, beta, coeffs, points):
    """Evaluate sum_t c_t z^alpha_t zbar^beta_t at every row of ``points``.

    Parameters
    ----------
    alpha, beta : (T, n) int64 arrays
    coeffs : (T,) complex128 array
    points : (N, n) complex128 array

    Returns
    -------
    (N,) complex128 array
    """
    points = np.asarray(points, dtype=np.complex128)
    if len(coeffs) == 0:
        return np.zeros(points.shape[0], dtype=np.complex128)
    conj = np.conj(points)
    deg = int(max(alpha.max(initial=0), beta.max(initial=0)))
    # power tables: (deg+1, N, n)
    pw = np.ones((deg + 1,) + points.shape, dtype=np.complex128)
    cpw = np.ones_like(pw)
    for k in range(1, deg + 1):
        pw[k] = pw[k - 1] * points
        cpw[k] = cpw[k - 1] * conj
    n = points.shape[1]
    out = np.zeros(points.shape[0], dtype=np.complex128)
    cols = np.arange(n)
    for t in range(len(coeffs)):
        term = np.full(points.shape[0], coeffs[t], dtype=np.complex128)
        a = alpha[t]
        b = beta[t]
        for j in cols:
            if a[j]:
                term *= pw[a[j], :, j]
            if b[j]:
                term *= cpw[b[j], :, j]
        out += term
    return out


def log_potential(points, anchors, weights, scale):
    """sum_k w_k log(||z - a_k|| / scale) for each row of ``points``.

    Returns the finite values and a boolean mask flagging rows that hit an
    anchor exactly (value -inf).
    """
    points = np.asarray(points, dtype=np.complex128)
    out = np.zeros(points.shape[0])
    hit = np.zeros(points.shape[0], dtype=bool)
    chunk = max(1, 2_000_000 // max(1, len(anchors)))
    logscale = np.log(scale)
    for s in range(0, points.shape[0], chunk):
        p = points[s:s + chunk]
        d2 = np.sum(np.abs(p[:, None, :] - anchors[None, :, :]) ** 2, axis=2)
        zero = d2 == 0.0
        hit[s:s + chunk] = zero.any(axis=1)
        with np.errstate(divide="ignore"):
            logs = 0.5 * np.log(np.where(zero, 1.0, d2)) - logscale
        out[s:s + chunk] = logs @ weights
    out[hit] = -np.inf
    return out, hit


def log_potential_hessian(point, anchors, weights):
    """Complex Hessian of sum_k w_k log||z - a_k|| at a single point.

    Uses d^2/dz_j dzbar_k log||u||^2 = delta_jk/||u||^2 - ubar_j u_k/||u||^4
    (halved for log||u||).
    """
    u = np.asarray(point, dtype=np.complex128)[None, :] - anchors
    n2 = np.sum(np.abs(u) ** 2, axis=1)
    m = anchors.shape[1]
    w1 = weights / n2
    w2 = weights / n2**2
    h = np.eye(m, dtype=np.complex128) * w1.sum()
    h -= np.einsum("k,kj,ki->ji", w2, np.conj(u), u)
    return 0.5 * h


def polydisc_distances(z, samples):
    """Kobayashi distance of the unit polydisc from ``z`` to each sample."""
    z = np.asarray(z, dtype=np.complex128)
    s = np.asarray(samples, dtype=np.complex128)
    num = np.abs(s - z[None, :])
    den = np.abs(1.0 - s * np.conj(z)[None, :])
    ratio = np.max(num / den, axis=1)
    return np.arctanh(np.minimum(ratio, 1.0))
