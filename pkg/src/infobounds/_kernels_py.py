"""Pure-Python implementations of the hot kernels.

Mirrors ``_kernels.pyx`` function for function. Inputs are assumed to be
pre-validated by the public wrappers in ``measures`` and ``bounds``.
"""
from math import exp, expm1, inf, log, log1p

import numpy as np


def binary_kl(p, q):
    out = 0.0
    if p > 0.0:
        if q <= 0.0:
            return inf
        out += p * log(p / q)
    if p < 1.0:
        if q >= 1.0:
            return inf
        out += (1.0 - p) * log((1.0 - p) / (1.0 - q))
    return out


def invert_binary_kl(q, d, tol, max_iter):
    """Bisection for ``binary_kl(p, q) = d`` on ``[q, 1]``; returns the upper end."""
    lo = q
    hi = 1.0
    it = 0
    while hi - lo >= tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if binary_kl(mid, q) > d:
            hi = mid
        else:
            lo = mid
        it += 1
    return hi


def kl_sum(p, q):
    p = np.asarray(p, dtype=np.float64).ravel()
    q = np.asarray(q, dtype=np.float64).ravel()
    pos = p > 0
    if np.any(q[pos] <= 0):
        return inf
    return float(np.sum(p[pos] * np.log(p[pos] / q[pos])))


def channel_stats(probs):
    """``(sum_y max_x W(y|x), 0.5 * sum_y (max_x - min_x) W(y|x))`` over supported x."""
    probs = np.asarray(probs, dtype=np.float64)
    rows = probs.sum(axis=1)
    sup = rows > 0
    w = probs[sup] / rows[sup, None]
    hi = w.max(axis=0)
    lo = w.min(axis=0)
    return float(hi.sum()), float(0.5 * (hi - lo).sum())


def _log_mgf(beta, q):
    # log(1 + (e^beta - 1) q), overflow-safe for large beta
    if q <= 0.0:
        return 0.0
    if beta > 1.0:
        return beta + log(q + (1.0 - q) * exp(-beta))
    return log1p(expm1(beta) * q)


def dv_value(q, d, beta):
    return (d + _log_mgf(beta, q)) / beta


def lautum_dv_value(q, l, beta):
    return -expm1(-l - beta * q) / -expm1(-beta)


def dv_min(q, d, betas):
    best = inf
    arg = float("nan")
    for b in betas:
        v = dv_value(q, d, float(b))
        if v < best:
            best, arg = v, float(b)
    return best, arg


def lautum_dv_min(q, l, betas):
    best = inf
    arg = float("nan")
    for b in betas:
        v = lautum_dv_value(q, l, float(b))
        if v < best:
            best, arg = v, float(b)
    return best, arg
