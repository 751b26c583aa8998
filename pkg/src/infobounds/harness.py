"""Seeded random instances and the brute-force soundness check.

Every instance in a suite gets its own seed derived from ``(base_seed, i)``,
so results do not depend on evaluation order or on the number of workers.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import inf, log

import numpy as np

from .bounds import BoundReport, Method, evaluate_all, invert_binary_kl
from .dist import EventMask, Joint, Pmf, event_probability, product_array
from .errors import DegenerateInstance, DomainError
from .measures import MeasureSet, all_measures

VIOLATION_TOL = 1e-9
MAX_RETRIES = 100
CONCENTRATION_RANGE = (0.2, 5.0)


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    n_x: int
    n_y: int
    concentration: float = 1.0
    event_density: float = 0.5

    def __post_init__(self):
        if not (2 <= self.n_x <= 8 and 2 <= self.n_y <= 8):
            raise DomainError(f"alphabet sizes must be in [2, 8], got {self.n_x}x{self.n_y}")
        if not self.concentration > 0:
            raise DomainError("concentration must be positive")
        if not 0.0 < self.event_density < 1.0:
            raise DomainError("event_density must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


def random_instance(spec: InstanceSpec) -> tuple[Joint, EventMask]:
    """Sample a joint and an event from ``spec``.

    Cell weights are standard exponentials raised to ``1/concentration``;
    large concentrations flatten the joint towards uniform. The mask is
    redrawn until it is neither empty nor full.
    """
    rng = np.random.default_rng(spec.seed)
    shape = (spec.n_x, spec.n_y)
    w = rng.standard_exponential(shape) ** (1.0 / spec.concentration)
    joint = Joint(w / w.sum())
    for _ in range(MAX_RETRIES):
        mask = rng.random(shape) < spec.event_density
        if mask.any() and not mask.all():
            return joint, EventMask(mask)
    raise DegenerateInstance(f"no proper event after {MAX_RETRIES} draws (seed={spec.seed})")


@dataclass
class VerifyRecord:
    exact_p: float
    exact_q: float
    measures: MeasureSet
    reports: list[BoundReport]
    margins: dict[Method, float]
    checked: dict[Method, bool]
    violations: list[Method] = field(default_factory=list)
    spec: InstanceSpec | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_instance(j: Joint, e, spec: InstanceSpec | None = None, beta_grid=None) -> VerifyRecord:
    """Compare every bound against the exact event probability.

    A method counts toward violations only when its preconditions hold. The
    lautum bound additionally needs the exact ``P_XY(E) <= 1/2``, which is
    the one place the oracle decides applicability.
    """
    mask = e if isinstance(e, EventMask) else EventMask(e)
    exact_p = event_probability(j, mask)
    exact_q = event_probability(product_array(j), mask)
    measures = all_measures(j)
    reports = evaluate_all(j, mask, beta_grid=beta_grid, measures=measures)
    margins, checked, violations = {}, {}, []
    for r in reports:
        use = r.applicable
        if r.method is Method.LautumThm1:
            use = use and exact_p <= 0.5
        margin = r.value - exact_p
        margins[r.method] = margin
        checked[r.method] = use
        if use and margin < -VIOLATION_TOL:
            violations.append(r.method)
    return VerifyRecord(exact_p, exact_q, measures, reports, margins, checked, violations, spec)


def tightness_witness(q: float, d: float) -> tuple[Pmf, Pmf, EventMask, float]:
    """Two-point pair for which the KL-inversion bound holds with equality.

    ``Q' = Ber(q)``, ``P' = Ber(p*)`` with ``p* = invert_binary_kl(q, d)``
    and ``E' = {1}``; then ``D(P'||Q') = d`` and ``P'(E') = p*``.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"q={q!r} must lie in (0, 1)")
    if not 0.0 <= d <= -log(q):
        raise DomainError(f"d={d!r} must lie in [0, log(1/q)]")
    p_star = invert_binary_kl(q, d)
    p_prime = Pmf.bernoulli(p_star)
    q_prime = Pmf.bernoulli(q)
    event = EventMask([False, True])
    return p_prime, q_prime, event, event_probability(p_prime, event)


# -- suites -----------------------------------------------------------------


def derive_seed(base_seed: int, index: int) -> int:
    """64-bit seed for suite member ``index``; a SeedSequence mix of both."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(index,))
    lo, hi = ss.generate_state(2, np.uint32)
    return int(lo) | (int(hi) << 32)


def suite_spec(base_seed: int, index: int, size_range=(2, 6), density_range=(0.4, 0.4)) -> InstanceSpec:
    seed = derive_seed(base_seed, index)
    rng = np.random.default_rng([seed, 1])
    n_x, n_y = (int(v) for v in rng.integers(size_range[0], size_range[1] + 1, size=2))
    lo, hi = density_range
    density = lo if lo == hi else float(rng.uniform(lo, hi))
    c_lo, c_hi = CONCENTRATION_RANGE
    concentration = float(np.exp(rng.uniform(np.log(c_lo), np.log(c_hi))))
    return InstanceSpec(seed, n_x, n_y, concentration, density)


METHODS = list(Method)


def _run_one(args) -> tuple[int, tuple[tuple[bool, float], ...]]:
    base_seed, index, size_range, density_range = args
    spec = suite_spec(base_seed, index, size_range, density_range)
    rec = verify_instance(*random_instance(spec), spec=spec)
    row = tuple((rec.checked[m], rec.margins[m]) for m in METHODS)
    return spec.seed, row


@dataclass
class MethodStats:
    checked: int = 0
    applicable: int = 0
    violations: int = 0
    min_margin: float = inf


@dataclass
class SuiteSummary:
    count: int
    base_seed: int
    size_range: tuple[int, int]
    density_range: tuple[float, float]
    methods: dict[Method, MethodStats]
    violating_seeds: list[int]

    @property
    def total_violations(self) -> int:
        return sum(s.violations for s in self.methods.values())

    def to_dict(self) -> dict:
        def num(x):
            return None if x == inf else float(f"{x:.9g}")

        return {
            "count": self.count,
            "base_seed": self.base_seed,
            "size_range": list(self.size_range),
            "density_range": [num(v) for v in self.density_range],
            "total_violations": self.total_violations,
            "violating_seeds": self.violating_seeds[:20],
            "methods": {
                m.name: {
                    "checked": s.checked,
                    "applicable": s.applicable,
                    "violations": s.violations,
                    "min_margin": num(s.min_margin),
                }
                for m, s in self.methods.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def run_suite(
    count: int,
    base_seed: int,
    size_range=(2, 6),
    density_range=(0.4, 0.4),
    workers: int = 1,
) -> SuiteSummary:
    """Verify ``count`` seeded instances and fold the results in index order.

    ``checked`` counts instances evaluated, ``applicable`` those where the
    method's preconditions held (and so entered violation accounting).
    """
    if count < 1:
        raise DomainError("count must be positive")
    lo, hi = size_range
    if not 2 <= lo <= hi <= 8:
        raise DomainError(f"size range {size_range} must satisfy 2 <= lo <= hi <= 8")
    if not 0.0 < density_range[0] <= density_range[1] < 1.0:
        raise DomainError(f"density range {density_range} must lie in (0, 1)")
    jobs = [(base_seed, i, tuple(size_range), tuple(density_range)) for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_one, jobs, chunksize=max(1, count // (8 * workers))))
    else:
        rows = [_run_one(job) for job in jobs]

    stats = {m: MethodStats() for m in METHODS}
    bad_seeds = []
    for seed, row in rows:
        bad = False
        for m, (use, margin) in zip(METHODS, row):
            s = stats[m]
            s.checked += 1
            if use:
                s.applicable += 1
                s.min_margin = min(s.min_margin, margin)
                if margin < -VIOLATION_TOL:
                    s.violations += 1
                    bad = True
        if bad:
            bad_seeds.append(seed)
    return SuiteSummary(count, base_seed, tuple(size_range), tuple(density_range), stats, bad_seeds)
