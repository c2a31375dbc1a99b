# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, sqrt, atanh, INFINITY

cnp.import_array()

ctypedef double complex cplx


def poly_eval(cnp.int64_t[:, ::1] alpha, cnp.int64_t[:, ::1] beta,
              cplx[::1] coeffs, points):
    cdef cplx[:, ::1] pts = np.ascontiguousarray(points, dtype=np.complex128)
    cdef Py_ssize_t N = pts.shape[0], n = pts.shape[1], T = coeffs.shape[0]
    cdef Py_ssize_t i, j, t, k
    cdef int deg = 0
    for t in range(T):
        for j in range(n):
            if alpha[t, j] > deg:
                deg = alpha[t, j]
            if beta[t, j] > deg:
                deg = beta[t, j]
    out_arr = np.zeros(N, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    pw_arr = np.empty((deg + 1, n), dtype=np.complex128)
    cpw_arr = np.empty((deg + 1, n), dtype=np.complex128)
    cdef cplx[:, ::1] pw = pw_arr
    cdef cplx[:, ::1] cpw = cpw_arr
    cdef cplx acc, term, zc
    for i in range(N):
        for j in range(n):
            pw[0, j] = 1.0
            cpw[0, j] = 1.0
            zc = pts[i, j].real - 1j * pts[i, j].imag
            for k in range(1, deg + 1):
                pw[k, j] = pw[k - 1, j] * pts[i, j]
                cpw[k, j] = cpw[k - 1, j] * zc
        acc = 0.0
        for t in range(T):
            term = coeffs[t]
            for j in range(n):
                term = term * pw[alpha[t, j], j] * cpw[beta[t, j], j]
            acc = acc + term
        out[i] = acc
    return out_arr


def log_potential(points, anchors, double[::1] weights, double scale):
    cdef cplx[:, ::1] pts = np.ascontiguousarray(points, dtype=np.complex128)
    cdef cplx[:, ::1] anc = np.ascontiguousarray(anchors, dtype=np.complex128)
    cdef Py_ssize_t N = pts.shape[0], K = anc.shape[0], m = pts.shape[1]
    cdef Py_ssize_t i, k, j
    out_arr = np.zeros(N)
    hit_arr = np.zeros(N, dtype=bool)
    cdef double[::1] out = out_arr
    cdef cnp.npy_bool[::1] hit = hit_arr
    cdef double d2, acc, dr, di, logscale = log(scale)
    for i in range(N):
        acc = 0.0
        for k in range(K):
            d2 = 0.0
            for j in range(m):
                dr = pts[i, j].real - anc[k, j].real
                di = pts[i, j].imag - anc[k, j].imag
                d2 += dr * dr + di * di
            if d2 == 0.0:
                hit[i] = True
                break
            acc += weights[k] * (0.5 * log(d2) - logscale)
        out[i] = -INFINITY if hit[i] else acc
    return out_arr, hit_arr


def log_potential_hessian(point, anchors, double[::1] weights):
    cdef cplx[::1] z = np.ascontiguousarray(point, dtype=np.complex128)
    cdef cplx[:, ::1] anc = np.ascontiguousarray(anchors, dtype=np.complex128)
    cdef Py_ssize_t K = anc.shape[0], m = anc.shape[1]
    cdef Py_ssize_t k, i, j
    h_arr = np.zeros((m, m), dtype=np.complex128)
    cdef cplx[:, ::1] h = h_arr
    u_arr = np.empty(m, dtype=np.complex128)
    cdef cplx[::1] u = u_arr
    cdef double n2, w1, w2
    for k in range(K):
        n2 = 0.0
        for j in range(m):
            u[j] = z[j] - anc[k, j]
            n2 += u[j].real * u[j].real + u[j].imag * u[j].imag
        w1 = weights[k] / n2
        w2 = weights[k] / (n2 * n2)
        for i in range(m):
            h[i, i] = h[i, i] + 0.5 * w1
            for j in range(m):
                h[i, j] = h[i, j] - 0.5 * w2 * (u[i].real - 1j * u[i].imag) * u[j]
    return h_arr


def polydisc_distances(z, samples):
    cdef cplx[::1] zz = np.ascontiguousarray(z, dtype=np.complex128)
    cdef cplx[:, ::1] s = np.ascontiguousarray(samples, dtype=np.complex128)
    cdef Py_ssize_t N = s.shape[0], n = s.shape[1], i, j
    out_arr = np.empty(N)
    cdef double[::1] out = out_arr
    cdef double best, r
    cdef cplx num, den, zc
    for i in range(N):
        best = 0.0
        for j in range(n):
            zc = zz[j].real - 1j * zz[j].imag
            num = s[i, j] - zz[j]
            den = 1.0 - s[i, j] * zc
            r = sqrt(num.real * num.real + num.imag * num.imag) / sqrt(den.real * den.real + den.imag * den.imag)
            if r > best:
                best = r
        if best >= 1.0:
            out[i] = INFINITY
        else:
            out[i] = atanh(best)
    return out_arr
