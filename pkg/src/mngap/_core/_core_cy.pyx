# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cumulative-quadrature kernels (hot path of every operator apply).

Cell formulas match ``_backend_np`` exactly; only the accumulation order
differs (sequential here, pairwise in numpy's cumsum).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline double _parabola_piece(double x0, double x1, double x2,
                                   double f0, double f1, double f2,
                                   double a, double b) nogil:
    cdef double d1 = (f1 - f0) / (x1 - x0)
    cdef double d2 = ((f2 - f1) / (x2 - x1) - d1) / (x2 - x0)
    cdef double s1 = a - x0
    cdef double s2 = b - x0
    cdef double t1 = a - x1
    cdef double t2 = b - x1
    cdef double i1 = 0.5 * (s2 * s2 - s1 * s1)
    cdef double i2 = (t2 * t2 * t2 - t1 * t1 * t1) / 3.0 \
        + 0.5 * (x1 - x0) * (t2 * t2 - t1 * t1)
    return f0 * (b - a) + d1 * i1 + d2 * i2


cdef void _cells_parabolic(const double[::1] x, const double[::1] f, double[::1] cells) nogil:
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i
    cdef double left_sub, right_sub
    cells[0] = _parabola_piece(x[0], x[1], x[2], f[0], f[1], f[2], x[0], x[1])
    for i in range(1, n - 2):
        right_sub = _parabola_piece(x[i - 1], x[i], x[i + 1],
                                    f[i - 1], f[i], f[i + 1], x[i], x[i + 1])
        left_sub = _parabola_piece(x[i], x[i + 1], x[i + 2],
                                   f[i], f[i + 1], f[i + 2], x[i], x[i + 1])
        cells[i] = 0.5 * (right_sub + left_sub)
    cells[n - 2] = _parabola_piece(x[n - 3], x[n - 2], x[n - 1],
                                   f[n - 3], f[n - 2], f[n - 1],
                                   x[n - 2], x[n - 1])


def cum_trapezoid(const double[::1] x, const double[::1] f):
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double acc = 0.0
    cdef Py_ssize_t i
    out[0] = 0.0
    with nogil:
        for i in range(n - 1):
            acc += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i])
            out[i + 1] = acc
    return out_arr


def cum_parabolic(const double[::1] x, const double[::1] f):
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(n)
    cells_arr = np.empty(n - 1)
    cdef double[::1] out = out_arr
    cdef double[::1] cells = cells_arr
    cdef double acc = 0.0
    cdef Py_ssize_t i
    out[0] = 0.0
    with nogil:
        _cells_parabolic(x, f, cells)
        for i in range(n - 1):
            acc += cells[i]
            out[i + 1] = acc
    return out_arr


def operator_core(const double[::1] x, const double[::1] g, bint parabolic=True):
    cdef Py_ssize_t n = x.shape[0]
    m_arr = np.empty(n)
    cdef double[::1] m = m_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            m[i] = x[i] * g[i]
    lower = cum_parabolic(x, m) if parabolic else cum_trapezoid(x, m)
    upper = cum_parabolic(x, g) if parabolic else cum_trapezoid(x, g)
    cdef double[::1] lo = lower
    cdef double[::1] up = upper
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double total = up[n - 1]
    with nogil:
        for i in range(n):
            out[i] = lo[i] / x[i] + (total - up[i])
    return out_arr
