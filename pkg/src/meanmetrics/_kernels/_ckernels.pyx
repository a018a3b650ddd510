# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch kernels; same signatures and semantics as ``_pykernels``."""
import numpy as np

from libc.math cimport fabs, log, log1p, pow, sqrt

BACKEND = "cython"

cdef double _SERIES_CUTOFF = 1e-4


cdef inline double _bdist(int kind, const double[:, ::1] X, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t j, n = X.shape[1]
    cdef double s = 0.0
    if kind == 0:
        return X[i, n - 1]
    for j in range(n):
        s += X[i, j] * X[i, j]
    if kind == 1:
        return 1.0 - sqrt(s)
    return sqrt(s)


cdef inline double _log_mean(double a, double b) noexcept nogil:
    cdef double u = b / a - 1.0
    if fabs(u) < _SERIES_CUTOFF:
        return a * (1.0 + u * (1.0 / 2.0 + u * (-1.0 / 12.0 + u * (1.0 / 24.0
                    + u * (-19.0 / 720.0 + u * (3.0 / 160.0))))))
    if u > -0.5 and u < 1.0:
        return (b - a) / log1p((b - a) / a)
    return (a - b) / log(a / b)


cdef inline double _mean(int code, double d, double a, double b) noexcept nogil:
    cdef double hi, lo
    if code == 0 or (code == 1 and d == 1.0):
        return 0.5 * a + 0.5 * b
    if code == 1:
        hi = a if a > b else b
        lo = b if a > b else a
        return hi * pow((1.0 + pow(lo / hi, d)) / 2.0, 1.0 / d)
    if code == 2:
        return _log_mean(a, b)
    if code == 3:
        return a if a < b else b
    if code == 4:
        return a if a > b else b
    if a == b:
        return a
    return sqrt(a) * sqrt(b)


cdef inline double _metric(int code, double d, double c, int form,
                           const double[:, ::1] X, Py_ssize_t i,
                           const double[:, ::1] Y, Py_ssize_t k,
                           double dx, double dy) noexcept nogil:
    cdef Py_ssize_t j, n = X.shape[1]
    cdef double s = 0.0, t, dist, m
    for j in range(n):
        t = X[i, j] - Y[k, j]
        s += t * t
    if s == 0.0:
        return 0.0
    dist = sqrt(s)
    m = _mean(code, d, dx, dy)
    if form == 0:
        return dist / (c * m)
    if form == 1:
        return log1p(dist / (c * m))
    return dist / (dist + 2.0 * c * m)


def boundary_distance(int kind, const double[:, ::1] X):
    cdef Py_ssize_t i, N = X.shape[0]
    out = np.empty(N)
    cdef double[::1] o = out
    with nogil:
        for i in range(N):
            o[i] = _bdist(kind, X, i)
    return out


def pair_metric(int kind, int mean_code, double d, double c, int form,
                const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t i, N = X.shape[0]
    out = np.empty(N)
    cdef double[::1] o = out
    with nogil:
        for i in range(N):
            o[i] = _metric(mean_code, d, c, form, X, i, Y, i,
                           _bdist(kind, X, i), _bdist(kind, Y, i))
    return out


def triangle_defect(int kind, int mean_code, double d, double c, int form,
                    const double[:, ::1] X, const double[:, ::1] Y,
                    const double[:, ::1] Z):
    cdef Py_ssize_t i, N = X.shape[0]
    cdef double dx, dy, dz
    out = np.empty(N)
    cdef double[::1] o = out
    with nogil:
        for i in range(N):
            dx = _bdist(kind, X, i)
            dy = _bdist(kind, Y, i)
            dz = _bdist(kind, Z, i)
            o[i] = (_metric(mean_code, d, c, form, X, i, Z, i, dx, dz)
                    + _metric(mean_code, d, c, form, Z, i, Y, i, dz, dy)
                    - _metric(mean_code, d, c, form, X, i, Y, i, dx, dy))
    return out
