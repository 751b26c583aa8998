"""Upper bounds on P(E) from Q(E) and a divergence, and their joint-level forms.

Scalar evaluators take ``q = Q(E)`` and a divergence ``d`` (nats). The
joint-level wrappers bind ``q = P_X P_Y(E)`` and the matching dependence
measure of ``P_XY`` and return :class:`BoundReport` objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import exp, inf, isnan, log, sqrt

import numpy as np

from ._backend import kernels
from .dist import EventMask, Joint, _mask_array, event_probability, product_array, slice_masses
from .errors import DomainError, ShapeMismatch
from .measures import MeasureSet, all_measures, binary_entropy, binary_kl

BISECT_TOL = 1e-12
BISECT_MAX_ITER = 200
BETA_GRID_SIZE = 200
BETA_MIN = 1e-3

LOG2 = log(2.0)
LOG4 = log(4.0)


class Method(str, Enum):
    Prop1Inverse = "prop1"
    Cor1ClosedForm = "cor1"
    LiteratureEq7 = "eq7"
    DVFamilyEq9 = "eq9"
    EllStarEq10 = "eq10"
    SubgaussianEq11 = "eq11"
    LautumThm1 = "thm1"
    LautumDVEq14 = "eq14"
    LeakageThm2 = "thm2"
    JInfThm3 = "thm3"


@dataclass(frozen=True)
class BoundReport:
    method: Method
    raw_value: float
    applicable: bool
    condition_note: str
    q: float
    measure: float
    extra: float | None = None

    @property
    def value(self) -> float:
        v = self.raw_value
        if isnan(v):
            return 1.0
        return min(max(v, 0.0), 1.0)

    def as_dict(self) -> dict:
        return {
            "method": self.method.name,
            "raw_value": self.raw_value,
            "value": self.value,
            "applicable": self.applicable,
            "condition_note": self.condition_note,
            "q": self.q,
            "measure": self.measure,
            "extra": self.extra,
        }


def _check_q_open(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise DomainError(f"q={q!r} must lie in (0, 1)")


def _check_q_closed(q: float) -> None:
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q={q!r} must lie in [0, 1]")


def _check_div(d: float, name: str = "d") -> None:
    if isnan(d) or d < 0.0:
        raise DomainError(f"{name}={d!r} must be >= 0")


def _check_beta(beta: float) -> None:
    if not beta > 0.0:
        raise DomainError(f"beta={beta!r} must be > 0")


# -- (q, d) bounds ----------------------------------------------------------


def invert_binary_kl(q: float, d: float) -> float:
    """Largest ``p`` in ``[q, 1]`` with ``binary_kl(p, q) <= d``.

    Bisection on ``[q, 1]``; the upper bracket end is returned so the result
    never under-approximates the root. ``d >= log(1/q)`` gives 1.
    """
    _check_q_open(q)
    _check_div(d)
    if d == 0.0:
        return q
    if d >= -log(q):
        return 1.0
    return kernels.invert_binary_kl(q, d, BISECT_TOL, BISECT_MAX_ITER)


def cor1_closed_form(q: float, y: float) -> float:
    """Closed-form relaxation of :func:`invert_binary_kl`.

    The larger root of ``p^2 (q1^2 + log^2 4) - 2p (2 log^2 2 + q1 (q2 + y))
    + (q2 + y)^2 = 0`` with ``q1 = log((1-q)/q)`` and ``q2 = log(1-q)``.
    Returns 1 when ``q > 1/2`` or ``y >= -log q`` (no usable bound there).
    """
    _check_q_open(q)
    _check_div(y, "y")
    if q > 0.5 or y >= -log(q):
        return 1.0
    q1 = log((1.0 - q) / q)
    s = log(1.0 - q) + y
    g = LOG2 * LOG2 + s * (-log(q) - y)
    num = 2.0 * LOG2 * LOG2 + q1 * s + LOG4 * sqrt(max(g, 0.0))
    return num / (q1 * q1 + LOG4 * LOG4)


def cor1_quadratic(q: float, y: float, p: float) -> float:
    """Residual of the quadratic whose larger root is :func:`cor1_closed_form`."""
    q1 = log((1.0 - q) / q)
    s = log(1.0 - q) + y
    return p * p * (q1 * q1 + LOG4 * LOG4) - 2.0 * p * (2.0 * LOG2 * LOG2 + q1 * s) + s * s


def literature_bound(q: float, d: float) -> float:
    """``(d + log 2) / log(1/q)``."""
    _check_q_open(q)
    _check_div(d)
    return (d + LOG2) / -log(q)


def log_mgf(beta: float, q: float) -> float:
    """``log(1 + (e^beta - 1) q)``, the cumulant function of a Bernoulli(q) indicator."""
    return kernels.dv_value(q, 0.0, beta) * beta


def dv_bound(q: float, d: float, beta: float) -> float:
    """``(d + log(1 + (e^beta - 1) q)) / beta``, valid for every ``beta > 0``."""
    _check_q_closed(q)
    _check_div(d)
    _check_beta(beta)
    return kernels.dv_value(q, d, beta)


def default_beta_grid(q: float) -> np.ndarray:
    """200 log-spaced points in ``[1e-3, 10 log(1/q)]``."""
    if q <= 0.0:
        upper = 1e3
    else:
        upper = 10.0 * -log(q)
    if upper <= BETA_MIN:
        upper = 1.0
    return np.geomspace(BETA_MIN, upper, BETA_GRID_SIZE)


def dv_infimum(q: float, d: float, betas=None) -> tuple[float, float]:
    """Smallest :func:`dv_bound` over a beta grid, with the minimizing beta."""
    _check_q_closed(q)
    _check_div(d)
    betas = default_beta_grid(q) if betas is None else np.asarray(betas, dtype=np.float64)
    if betas.size == 0 or np.any(betas <= 0):
        raise DomainError("beta grid must be non-empty and positive")
    return kernels.dv_min(q, d, betas)


def ell_star(t: float, q: float) -> float:
    """Convex conjugate of ``log_mgf(., q)`` on ``t >= 0``."""
    _check_q_open(q)
    if isnan(t) or t < 0.0:
        raise DomainError(f"t={t!r} must be >= 0")
    if t < q:
        return 0.0
    if t <= 1.0:
        return binary_kl(t, q)
    return inf


def ell_star_inverse_bound(q: float, d: float) -> float:
    """``inf {t : ell_star(t, q) > d}``.

    Found by its own bisection on the predicate, independent of
    :func:`invert_binary_kl`, so the two can be checked against each other.
    """
    _check_q_open(q)
    _check_div(d)
    if d == 0.0:
        return q
    if d > -log(q):
        return 1.0
    lo, hi = q, 1.0
    for _ in range(BISECT_MAX_ITER):
        if hi - lo < BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        if ell_star(mid, q) > d:
            hi = mid
        else:
            lo = mid
    return hi


def subgaussian_bound(q: float, d: float) -> float:
    """``q + sqrt(d / 2)``."""
    _check_q_closed(q)
    _check_div(d)
    return q + sqrt(d / 2.0)


def lautum_bound(q: float, l: float) -> BoundReport:
    """``1 - exp(-h(q) - l)``; certified only when ``P(E) <= 1/2``."""
    _check_q_closed(q)
    _check_div(l, "l")
    raw = 1.0 - exp(-binary_entropy(q) - l)
    return BoundReport(
        Method.LautumThm1, raw, True, "holds only if P(E) <= 1/2 (not checkable from q, L)", q, l
    )


def lautum_dv_bound(q: float, l: float, beta: float) -> float:
    """``(1 - exp(-l - beta q)) / (1 - exp(-beta))``, valid for every ``beta > 0``."""
    _check_q_closed(q)
    _check_div(l, "l")
    _check_beta(beta)
    return kernels.lautum_dv_value(q, l, beta)


def lautum_dv_infimum(q: float, l: float, betas=None) -> tuple[float, float]:
    _check_q_closed(q)
    _check_div(l, "l")
    betas = default_beta_grid(q) if betas is None else np.asarray(betas, dtype=np.float64)
    if betas.size == 0 or np.any(betas <= 0):
        raise DomainError("beta grid must be non-empty and positive")
    return kernels.lautum_dv_min(q, l, betas)


# -- joint-level bounds -----------------------------------------------------


def _alpha(j: Joint, e, alpha_override: float | None) -> tuple[float, float, bool]:
    alpha_star = float(np.max(slice_masses(j, e)))
    if alpha_override is None:
        return alpha_star, alpha_star, True
    if isnan(alpha_override) or not 0.0 <= alpha_override <= 1.0:
        raise DomainError(f"alpha={alpha_override!r} must lie in [0, 1]")
    return float(alpha_override), alpha_star, alpha_override >= alpha_star


def leakage_bound(j: Joint, e, alpha_override: float | None = None) -> BoundReport:
    """``alpha * exp(max_leakage)`` where ``alpha >= max_y P_X(E_y)``.

    An override below ``max_y P_X(E_y)`` is still evaluated but reported as
    not applicable.
    """
    mask = _mask_array(e)
    if mask.shape != j.shape:
        raise ShapeMismatch(f"joint shape {j.shape} vs event shape {mask.shape}")
    alpha, alpha_star, ok = _alpha(j, mask, alpha_override)
    leak_sum, _ = kernels.channel_stats(j.probs)
    q = event_probability(product_array(j), mask)
    note = f"alpha={alpha:.9g} >= max_y P_X(E_y)={alpha_star:.9g}"
    if not ok:
        note = f"alpha={alpha:.9g} < max_y P_X(E_y)={alpha_star:.9g}"
    return BoundReport(Method.LeakageThm2, alpha * leak_sum, ok, note, q, max(log(leak_sum), 0.0), alpha)


def jinf_bound(j: Joint, e, alpha_override: float | None = None) -> BoundReport:
    """``alpha (2 (1 - alpha) J_inf + 1)``, requires ``max_y P_X(E_y) <= alpha <= 1/2``."""
    mask = _mask_array(e)
    if mask.shape != j.shape:
        raise ShapeMismatch(f"joint shape {j.shape} vs event shape {mask.shape}")
    alpha, alpha_star, ok = _alpha(j, mask, alpha_override)
    _, jinf = kernels.channel_stats(j.probs)
    q = event_probability(product_array(j), mask)
    if not ok:
        raw = alpha * (2.0 * (1.0 - alpha) * jinf + 1.0)
        note = f"alpha={alpha:.9g} < max_y P_X(E_y)={alpha_star:.9g}"
        return BoundReport(Method.JInfThm3, raw, False, note, q, jinf, alpha)
    if alpha > 0.5:
        return BoundReport(Method.JInfThm3, 1.0, False, f"alpha={alpha:.9g} > 1/2", q, jinf, alpha)
    raw = alpha * (2.0 * (1.0 - alpha) * jinf + 1.0)
    return BoundReport(Method.JInfThm3, raw, True, f"alpha={alpha:.9g} <= 1/2", q, jinf, alpha)


def centered_deviations(j: Joint, f) -> np.ndarray:
    """``E_{P_X} |f(X, y) - mu_y|`` for each y, with ``mu_y = E_{P_X} f(X, y)``."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != j.shape:
        raise ShapeMismatch(f"table shape {f.shape} vs joint shape {j.shape}")
    px = j.probs.sum(axis=1)
    mu = px @ f
    return px @ np.abs(f - mu[None, :])


def expectation_gap_bound(j: Joint, f) -> tuple[float, float]:
    """``(max_y E|f(X,y) - mu_y| * J_inf, |E_{P_XY} f - E_{P_X P_Y} f|)``."""
    dev = centered_deviations(j, f)
    f = np.asarray(f, dtype=np.float64)
    _, jinf = kernels.channel_stats(j.probs)
    exact = abs(float(np.sum((j.probs - product_array(j)) * f)))
    return float(dev.max()) * jinf, exact


# -- evaluate everything ----------------------------------------------------


def _qd_reports(q: float, d: float, betas) -> list[BoundReport]:
    """Reports for the six bounds that depend on (q, I) only, in enum order."""
    R = BoundReport
    if q == 0.0:
        note = "q=0 with finite divergence forces P(E)=0"
        prop1 = R(Method.Prop1Inverse, 0.0, True, note, q, d)
        cor1 = R(Method.Cor1ClosedForm, 0.0, True, note, q, d)
        eq7 = R(Method.LiteratureEq7, 0.0, True, note, q, d)
        eq10 = R(Method.EllStarEq10, 0.0, True, note, q, d)
    elif q == 1.0:
        prop1 = R(Method.Prop1Inverse, 1.0, False, "q=1: trivial", q, d)
        cor1 = R(Method.Cor1ClosedForm, 1.0, False, "q=1: trivial", q, d)
        eq7 = R(Method.LiteratureEq7, 1.0, False, "q=1: trivial", q, d)
        eq10 = R(Method.EllStarEq10, 1.0, False, "q=1: trivial", q, d)
    else:
        cap = -log(q)
        ok = d <= cap
        note = f"I={d:.9g} {'<=' if ok else '>'} log(1/q)={cap:.9g}"
        prop1 = R(Method.Prop1Inverse, invert_binary_kl(q, d), ok, note, q, d)
        if q > 0.5:
            cor1 = R(Method.Cor1ClosedForm, 1.0, False, "q > 1/2", q, d)
        else:
            cor1 = R(Method.Cor1ClosedForm, cor1_closed_form(q, d), ok, note, q, d)
        eq7 = R(Method.LiteratureEq7, literature_bound(q, d), True, "", q, d)
        eq10 = R(Method.EllStarEq10, ell_star_inverse_bound(q, d), True, "", q, d)
    v, b = dv_infimum(q, d, betas)
    n = BETA_GRID_SIZE if betas is None else len(betas)
    eq9 = R(Method.DVFamilyEq9, v, True, f"inf over {n} betas", q, d, b)
    eq11 = R(Method.SubgaussianEq11, subgaussian_bound(q, d), True, "", q, d)
    return [prop1, cor1, eq7, eq9, eq10, eq11]


def evaluate_all(
    j: Joint,
    e,
    beta_grid=None,
    alpha: float | None = None,
    measures: MeasureSet | None = None,
) -> list[BoundReport]:
    """Every bound for one instance, in :class:`Method` order."""
    mask = _mask_array(e)
    if mask.shape != j.shape:
        raise ShapeMismatch(f"joint shape {j.shape} vs event shape {mask.shape}")
    if measures is None:
        measures = all_measures(j)
    q = min(event_probability(product_array(j), mask), 1.0)
    d = measures.mutual_information
    l = measures.lautum
    betas = None if beta_grid is None else np.atleast_1d(np.asarray(beta_grid, dtype=np.float64))

    reports = _qd_reports(q, d, betas)
    reports.append(lautum_bound(q, l))
    v, b = lautum_dv_infimum(q, l, betas)
    reports.append(BoundReport(Method.LautumDVEq14, v, True, "", q, l, b))
    reports.append(leakage_bound(j, mask, alpha))
    reports.append(jinf_bound(j, mask, alpha))
    return reports


def evaluate(j: Joint, e: EventMask, method: Method, beta=None, alpha=None) -> BoundReport:
    betas = None if beta is None else [beta]
    for r in evaluate_all(j, e, betas, alpha):
        if r.method == Method(method):
            return r
    raise KeyError(method)
