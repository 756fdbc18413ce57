# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the grid kernels in ``pure.py``.

Same contracts and edge-case conventions; see that module's docstring.
"""

from libc.math cimport log2, sqrt, fabs, INFINITY

import numpy as np

DEF P0P_FLOOR = 1e-300


def fg_grid(double p0, double q, double p, alphas, betas):
    cdef double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] be = np.ascontiguousarray(betas, dtype=np.float64)
    cdef Py_ssize_t na = al.shape[0], nb = be.shape[0]
    f_arr = np.empty((na, nb), dtype=np.float64)
    g_arr = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] f = f_arr
    cdef double[:, ::1] g = g_arr
    cdef Py_ssize_t i, j
    cdef double a, b, p0p, a_term, b_term, den, cap
    cap = 0.5 * log2(1.0 + p)
    for j in range(nb):
        b = be[j]
        p0p = p0 - b * b * q
        for i in range(na):
            a = al[i]
            a_term = p0p + (1.0 + b) * (1.0 + b) * q + p + 1.0
            b_term = q * (a - 1.0 - b) * (a - 1.0 - b) + 1.0
            if p0p < -P0P_FLOOR:
                f[i, j] = -INFINITY
                g[i, j] = -INFINITY
            elif fabs(p0p) <= P0P_FLOOR:
                if a == 0.0:
                    f[i, j] = 0.5 * log2(a_term / b_term)
                    g[i, j] = f[i, j]
                else:
                    f[i, j] = -INFINITY
                    g[i, j] = cap
            else:
                den = p0p * b_term + a * a * q
                f[i, j] = 0.5 * log2(p0p * a_term / den)
                g[i, j] = 0.5 * log2(1.0 + p * (p0p + a * a * q) / den)
    return f_arr, g_arr


def c_margin_grid(double p0, double q, double p, alphas):
    cdef double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef Py_ssize_t n = al.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double a, p0p
    for i in range(n):
        a = al[i]
        p0p = p0 - (a - 1.0) * (a - 1.0) * q
        out[i] = p0p * p0p - a * a * q * (p + 1.0 - p0p)
    return out_arr


def helper_rate_grid(double p0, double q, double p, rhos):
    cdef double[::1] r = np.ascontiguousarray(rhos, dtype=np.float64)
    cdef Py_ssize_t n = r.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double rho, den, root
    root = sqrt(p0 * q)
    for i in range(n):
        rho = r[i]
        den = q + 2.0 * rho * root + p0 + 1.0
        out[i] = 0.5 * log2(1.0 + p / den) + 0.5 * log2(1.0 + p0 - rho * rho * p0)
    return out_arr
