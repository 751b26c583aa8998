"""Divergences and dependence measures on finite distributions (all in nats)."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import inf, isfinite, log

import numpy as np

from ._backend import kernels
from .dist import Joint, Pmf, product_array
from .errors import DomainError, ShapeMismatch, SupportViolation


@dataclass(frozen=True)
class MeasureSet:
    mutual_information: float
    lautum: float
    max_leakage: float
    j_infinity: float

    def as_dict(self) -> dict:
        return asdict(self)


def _pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    pa = p.probs if isinstance(p, (Pmf, Joint)) else np.asarray(p, dtype=np.float64)
    qa = q.probs if isinstance(q, (Pmf, Joint)) else np.asarray(q, dtype=np.float64)
    if pa.shape != qa.shape:
        raise ShapeMismatch(f"shapes differ: {pa.shape} vs {qa.shape}")
    return pa, qa


def _check_unit(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"{name}={x!r} outside [0, 1]")


def kl_divergence(p, q) -> float:
    """D(p||q) with 0 log(0/.) = 0; +inf when p puts mass where q has none."""
    pa, qa = _pair(p, q)
    return max(kernels.kl_sum(pa, qa), 0.0)


def binary_entropy(p: float) -> float:
    _check_unit("p", p)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * log(p) - (1.0 - p) * log(1.0 - p)


def binary_kl(p: float, q: float) -> float:
    """D(Ber(p) || Ber(q))."""
    _check_unit("p", p)
    _check_unit("q", q)
    return max(kernels.binary_kl(p, q), 0.0)


def mutual_information(j: Joint) -> float:
    return kl_divergence(j.probs, product_array(j))


def lautum_information(j: Joint) -> float:
    """D(P_X P_Y || P_XY); infinite whenever the joint has a zero the product lacks."""
    return kl_divergence(product_array(j), j.probs)


def max_leakage(j: Joint) -> float:
    leak_sum, _ = kernels.channel_stats(j.probs)
    return max(log(leak_sum), 0.0)


def leakage_sum(j: Joint) -> float:
    """``exp(max_leakage)``, i.e. ``sum_y max_{x: P_X(x)>0} P_{Y|X}(y|x)``."""
    return kernels.channel_stats(j.probs)[0]


def j_infinity(j: Joint) -> float:
    # max and min both range over supported x only
    return kernels.channel_stats(j.probs)[1]


def d_infinity(p, q) -> float:
    """log max_{z: p(z) > 0} p(z)/q(z)."""
    pa, qa = _pair(p, q)
    pos = pa > 0
    if np.any(qa[pos] <= 0):
        raise SupportViolation("p is not absolutely continuous with respect to q")
    return float(np.log(np.max(pa[pos] / qa[pos])))


def all_measures(j: Joint) -> MeasureSet:
    leak, jinf = kernels.channel_stats(j.probs)
    pxpy = product_array(j)
    mi = max(kernels.kl_sum(j.probs, pxpy), 0.0)
    lau = max(kernels.kl_sum(pxpy, j.probs), 0.0)
    return MeasureSet(
        mutual_information=mi,
        lautum=lau if isfinite(lau) else inf,
        max_leakage=max(log(leak), 0.0),
        j_infinity=jinf,
    )
