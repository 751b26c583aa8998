# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contract as ``_kernels_py``."""
from libc.math cimport INFINITY, NAN, exp, expm1, log, log1p


cpdef double binary_kl(double p, double q) noexcept nogil:
    cdef double out = 0.0
    if p > 0.0:
        if q <= 0.0:
            return INFINITY
        out += p * log(p / q)
    if p < 1.0:
        if q >= 1.0:
            return INFINITY
        out += (1.0 - p) * log((1.0 - p) / (1.0 - q))
    return out


cpdef double invert_binary_kl(double q, double d, double tol, int max_iter) noexcept nogil:
    cdef double lo = q, hi = 1.0, mid
    cdef int it = 0
    while hi - lo >= tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if binary_kl(mid, q) > d:
            hi = mid
        else:
            lo = mid
        it += 1
    return hi


cdef double _kl_sum(const double[::1] pv, const double[::1] qv) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(pv.shape[0]):
        if pv[i] > 0.0:
            if qv[i] <= 0.0:
                return INFINITY
            acc += pv[i] * log(pv[i] / qv[i])
    return acc


def kl_sum(p, q):
    cdef const double[::1] pv = _as_1d(p)
    cdef const double[::1] qv = _as_1d(q)
    cdef double out
    with nogil:
        out = _kl_sum(pv, qv)
    return out


def channel_stats(probs):
    import numpy as np
    cdef const double[:, ::1] a = np.ascontiguousarray(probs, dtype=np.float64)
    cdef Py_ssize_t nx = a.shape[0], ny = a.shape[1], x, y
    cdef double rs, w, hi, lo, leak = 0.0, jinf = 0.0
    cdef double[::1] rows = np.empty(nx)
    with nogil:
        for x in range(nx):
            rs = 0.0
            for y in range(ny):
                rs += a[x, y]
            rows[x] = rs
        for y in range(ny):
            hi = -INFINITY
            lo = INFINITY
            for x in range(nx):
                if rows[x] > 0.0:
                    w = a[x, y] / rows[x]
                    if w > hi:
                        hi = w
                    if w < lo:
                        lo = w
            leak += hi
            jinf += hi - lo
    return leak, 0.5 * jinf


cdef inline double _log_mgf(double beta, double q) noexcept nogil:
    if q <= 0.0:
        return 0.0
    if beta > 1.0:
        return beta + log(q + (1.0 - q) * exp(-beta))
    return log1p(expm1(beta) * q)


cpdef double dv_value(double q, double d, double beta) noexcept nogil:
    return (d + _log_mgf(beta, q)) / beta


cpdef double lautum_dv_value(double q, double l, double beta) noexcept nogil:
    return -expm1(-l - beta * q) / -expm1(-beta)


def dv_min(double q, double d, betas):
    cdef const double[::1] b = _as_1d(betas)
    cdef Py_ssize_t i
    cdef double v, best = INFINITY, arg = NAN
    with nogil:
        for i in range(b.shape[0]):
            v = dv_value(q, d, b[i])
            if v < best:
                best = v
                arg = b[i]
    return best, arg


def lautum_dv_min(double q, double l, betas):
    cdef const double[::1] b = _as_1d(betas)
    cdef Py_ssize_t i
    cdef double v, best = INFINITY, arg = NAN
    with nogil:
        for i in range(b.shape[0]):
            v = lautum_dv_value(q, l, b[i])
            if v < best:
                best = v
                arg = b[i]
    return best, arg


def _as_1d(x):
    import numpy as np
    return np.ascontiguousarray(x, dtype=np.float64).ravel()
