"""Finite distributions, joint distributions and events.

Everything downstream is checked against :func:`event_probability`, which is
a plain masked sum and therefore exact up to floating-point summation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from os import PathLike
from typing import Union

import numpy as np

from .errors import (
    IndexOutOfRange,
    NegativeMass,
    ShapeMismatch,
    SumNotOne,
    ValidationError,
)

SUM_TOL = 1e-12
# entries in [-SNAP_TOL, 0) are rounding noise and become exact zeros
SNAP_TOL = 1e-15


def _clean(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ShapeMismatch(f"expected a {ndim}-d array, got shape {arr.shape}")
    if arr.size == 0:
        raise ShapeMismatch("empty alphabet")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("probabilities must be finite")
    arr[(arr < 0) & (arr >= -SNAP_TOL)] = 0.0
    arr += 0.0  # -0.0 -> 0.0
    return arr


def _check_mass(arr: np.ndarray) -> None:
    neg = np.flatnonzero(arr < 0)
    if neg.size:
        i = int(neg[0])
        raise NegativeMass(f"entry {i} is negative ({arr.flat[i]!r})")
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise SumNotOne(f"probabilities sum to {total!r}, not 1")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability vector over ``{0, ..., alphabet_size - 1}``."""

    probs: np.ndarray

    def __post_init__(self):
        arr = _clean(self.probs, 1)
        _check_mass(arr)
        object.__setattr__(self, "probs", _freeze(arr))

    @property
    def alphabet_size(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def bernoulli(cls, p: float) -> "Pmf":
        """``[1 - p, p]``; the event of interest is symbol 1."""
        return cls([1.0 - p, p])

    def __repr__(self):
        return f"Pmf({self.probs.tolist()})"


@dataclass(frozen=True, eq=False)
class Joint:
    """Joint pmf ``P_XY`` stored as an ``n_x x n_y`` matrix (rows index x)."""

    probs: np.ndarray

    def __post_init__(self):
        arr = _clean(self.probs, 2)
        _check_mass(arr)
        object.__setattr__(self, "probs", _freeze(arr))

    @property
    def n_x(self) -> int:
        return self.probs.shape[0]

    @property
    def n_y(self) -> int:
        return self.probs.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    @classmethod
    def from_flat(cls, nx: int, ny: int, flat) -> "Joint":
        flat = np.asarray(flat, dtype=np.float64)
        if flat.ndim != 1 or flat.size != nx * ny:
            raise ShapeMismatch(f"expected {nx * ny} entries, got {flat.size}")
        return cls(flat.reshape(nx, ny))

    @classmethod
    def independent(cls, px, py) -> "Joint":
        px = Pmf(px).probs
        py = Pmf(py).probs
        return cls(np.outer(px, py))

    @classmethod
    def from_channel(cls, px, channel) -> "Joint":
        """Build ``P_XY(x, y) = P_X(x) W(y|x)`` from an input pmf and a row-stochastic matrix."""
        px = Pmf(px).probs
        w = np.asarray(channel, dtype=np.float64)
        if w.shape[0] != px.size:
            raise ShapeMismatch("channel rows must match the input alphabet")
        return cls(px[:, None] * w)

    def flat(self) -> np.ndarray:
        return self.probs.ravel()

    def __repr__(self):
        return f"Joint({self.probs.tolist()})"


@dataclass(frozen=True, eq=False)
class EventMask:
    """Dense boolean indicator of an event, 1-d (over Z) or 2-d (over X x Y)."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.array(self.mask)
        if m.dtype != np.bool_:
            if not np.all(np.isin(m, (0, 1))):
                raise ValidationError("event entries must be 0/1 or boolean")
            m = m.astype(bool)
        if m.ndim not in (1, 2) or m.size == 0:
            raise ShapeMismatch(f"bad event shape {m.shape}")
        object.__setattr__(self, "mask", _freeze(m))

    @property
    def shape(self):
        return self.mask.shape

    @classmethod
    def from_flat(cls, nx: int, ny: int, flat) -> "EventMask":
        flat = np.asarray(flat)
        if flat.ndim != 1 or flat.size != nx * ny:
            raise ShapeMismatch(f"expected {nx * ny} event entries, got {flat.size}")
        return cls(flat.reshape(nx, ny))

    @classmethod
    def diagonal(cls, n: int) -> "EventMask":
        return cls(np.eye(n, dtype=bool))

    def __or__(self, other: "EventMask") -> "EventMask":
        return EventMask(self.mask | _mask_array(other))

    def __and__(self, other: "EventMask") -> "EventMask":
        return EventMask(self.mask & _mask_array(other))

    def __repr__(self):
        return f"EventMask({self.mask.astype(int).tolist()})"


Dist = Union[Pmf, Joint]


def _mask_array(e) -> np.ndarray:
    return e.mask if isinstance(e, EventMask) else EventMask(e).mask


def _prob_array(dist) -> np.ndarray:
    if isinstance(dist, (Pmf, Joint)):
        return dist.probs
    return np.asarray(dist, dtype=np.float64)


def validate(dist) -> None:
    """Check a distribution; raise on the first violated invariant.

    Accepts a :class:`Pmf`, a :class:`Joint`, or raw array data (1-d is read
    as a pmf, 2-d as a joint). Returns ``None`` when the data is valid.
    """
    if isinstance(dist, (Pmf, Joint)):
        arr = dist.probs
        _check_mass(arr)
        return
    arr = np.array(dist, dtype=np.float64)
    if arr.ndim not in (1, 2):
        raise ShapeMismatch(f"expected a 1-d or 2-d array, got shape {arr.shape}")
    _check_mass(_clean(arr, arr.ndim))


def marginals(j: Joint) -> tuple[Pmf, Pmf]:
    """Row sums (P_X) and column sums (P_Y)."""
    return Pmf(j.probs.sum(axis=1)), Pmf(j.probs.sum(axis=0))


def product_array(j: Joint) -> np.ndarray:
    """``P_X(x) P_Y(y)`` as a bare array (no validation pass)."""
    return np.outer(j.probs.sum(axis=1), j.probs.sum(axis=0))


def product_of_marginals(j: Joint) -> Joint:
    return Joint(product_array(j))


def event_probability(dist, e) -> float:
    """Exact mass of the event: the sum of probabilities over masked cells."""
    p = _prob_array(dist)
    m = _mask_array(e)
    if p.shape != m.shape:
        raise ShapeMismatch(f"distribution shape {p.shape} vs event shape {m.shape}")
    return float(p[m].sum())


def event_slice(e, y: int) -> np.ndarray:
    """``E_y = {x : (x, y) in E}`` as a boolean vector over X."""
    m = _mask_array(e)
    if m.ndim != 2:
        raise ShapeMismatch("event slices need a 2-d event")
    if not 0 <= y < m.shape[1]:
        raise IndexOutOfRange(f"y={y} outside [0, {m.shape[1]})")
    return m[:, y].copy()


def slice_masses(j: Joint, e) -> np.ndarray:
    """``P_X(E_y)`` for every y."""
    m = _mask_array(e)
    if m.shape != j.shape:
        raise ShapeMismatch(f"joint shape {j.shape} vs event shape {m.shape}")
    px = j.probs.sum(axis=1)
    return px @ m


def conditional_y_given_x(j: Joint) -> np.ndarray:
    """Channel matrix ``P_{Y|X}``.

    Rows with ``P_X(x) = 0`` are undefined and come back as rows of NaN, so
    any downstream ``nanmax``/``nanmin`` ranges over supported inputs only.
    """
    px = j.probs.sum(axis=1)
    out = np.full(j.shape, np.nan)
    sup = px > 0
    out[sup] = j.probs[sup] / px[sup, None]
    return out


def supported_rows(j: Joint) -> np.ndarray:
    return j.probs.sum(axis=1) > 0


# -- JSON instance format ---------------------------------------------------


def instance_from_dict(doc: dict) -> tuple[Joint, EventMask | None]:
    """Parse ``{"nx", "ny", "pmf", "event"?}`` (row-major flat lists)."""
    try:
        nx, ny = int(doc["nx"]), int(doc["ny"])
        pmf = doc["pmf"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed instance: {exc}") from exc
    if nx < 1 or ny < 1:
        raise ShapeMismatch("nx and ny must be positive")
    joint = Joint.from_flat(nx, ny, pmf)
    event = doc.get("event")
    if event is None:
        return joint, None
    return joint, EventMask.from_flat(nx, ny, event)


def instance_to_dict(j: Joint, e: EventMask | None = None) -> dict:
    doc = {"nx": j.n_x, "ny": j.n_y, "pmf": j.flat().tolist()}
    if e is not None:
        doc["event"] = e.mask.ravel().astype(int).tolist()
    return doc


def load_instance(path: str | PathLike) -> tuple[Joint, EventMask | None]:
    """Read an instance file. ``json.JSONDecodeError`` propagates for bad JSON."""
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValidationError("instance must be a JSON object")
    return instance_from_dict(doc)


def save_instance(path: str | PathLike, j: Joint, e: EventMask | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(j, e), fh)
        fh.write("\n")
