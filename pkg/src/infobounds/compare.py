"""Tabulated comparisons of the (q, d) bounds: curves along d = -k log(1-q), ratio decay near d = 0, and the subgaussian triviality check."""
from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from math import log

import numpy as np

from .bounds import (
    cor1_closed_form,
    dv_bound,
    invert_binary_kl,
    literature_bound,
    subgaussian_bound,
)
from .errors import DomainError

RATIO_Y0 = 1e-12


def _clamp(v: float) -> float:
    return min(max(v, 0.0), 1.0)


@dataclass(frozen=True)
class ComparisonRow:
    q: float
    d: float
    prop1: float
    cor1: float
    eq7: float
    eq9_default_beta: float
    eq11: float

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def values(self) -> tuple:
        return astuple(self)


def comparison_row(q: float, d: float) -> ComparisonRow:
    """All (q, d) bounds at one point, clamped to [0, 1]."""
    return ComparisonRow(
        q=q,
        d=d,
        prop1=_clamp(invert_binary_kl(q, d)),
        cor1=_clamp(cor1_closed_form(q, d)),
        eq7=_clamp(literature_bound(q, d)),
        eq9_default_beta=_clamp(dv_bound(q, d, -log(q))),
        eq11=_clamp(subgaussian_bound(q, d)),
    )


def figure1_rows(k: float, q_min: float = 1e-4, q_max: float = 0.5, steps: int = 50) -> list[ComparisonRow]:
    """Bounds along ``d = -k log(1 - q)`` on a log-spaced q grid."""
    if not 0.0 < q_min < q_max <= 0.5:
        raise DomainError(f"need 0 < q_min < q_max <= 0.5, got {q_min}, {q_max}")
    if steps < 1:
        raise DomainError("steps must be positive")
    qs = np.geomspace(q_min, q_max, steps) if steps > 1 else np.array([q_min])
    return [comparison_row(float(q), -k * log(1.0 - float(q))) for q in qs]


@dataclass(frozen=True)
class RatioRow:
    q: float
    eq7_value: float
    cor1_value: float
    ratio: float
    inverse_ratio: float


def ratio_rows(qs, y0: float = RATIO_Y0) -> list[RatioRow]:
    """Literature bound vs. the closed form at ``y = y0``, standing in for ``y -> 0+``.

    ``ratio`` is eq7 / cor1; ``inverse_ratio`` is cor1 / eq7, the quantity
    that tends to 0 as ``q -> 0``.
    """
    rows = []
    for q in qs:
        q = float(q)
        if not 0.0 < q < 0.5:
            raise DomainError(f"q={q!r} must lie in (0, 0.5)")
        eq7 = literature_bound(q, y0)
        cor1 = cor1_closed_form(q, y0)
        rows.append(RatioRow(q, eq7, cor1, eq7 / cor1, cor1 / eq7))
    return rows


@dataclass(frozen=True)
class Remark1Result:
    q: float
    d: float
    eq11_raw: float
    eq7: float
    cor1: float

    @property
    def holds(self) -> bool:
        return self.eq11_raw > 1.0 and self.eq7 < 1.0 and self.cor1 < 1.0


def remark1(q: float) -> Remark1Result:
    """At ``d = -log(q)/2`` the subgaussian bound exceeds 1 for small q while the others stay below."""
    if not 0.0 < q <= 0.5:
        raise DomainError(f"q={q!r} must lie in (0, 0.5]")
    d = -log(q) / 2.0
    return Remark1Result(q, d, subgaussian_bound(q, d), literature_bound(q, d), cor1_closed_form(q, d))
