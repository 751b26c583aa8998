"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one row per workload with the best-of-N wall time for each backend.
The end-to-end suite row swaps the kernel module used by the bound and
measure code, so it shows how much of a verify run the kernels account for.
"""
import argparse
import time
from contextlib import contextmanager

import numpy as np

from infobounds import _kernels_py, bounds, measures
from infobounds.harness import run_suite

try:
    from infobounds import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


@contextmanager
def using(kernels):
    saved = bounds.kernels, measures.kernels
    bounds.kernels = measures.kernels = kernels
    try:
        yield
    finally:
        bounds.kernels, measures.kernels = saved


def workloads(k):
    rng = np.random.default_rng(0)
    qs = rng.uniform(0.01, 0.5, 2000)
    ds = rng.uniform(0, 1, 2000) * -np.log(qs)
    chans = [rng.dirichlet(np.ones(6), size=6) for _ in range(2000)]
    betas = np.geomspace(1e-3, 50, 200)

    def binary_kl():
        for q, d in zip(qs, ds):
            k.binary_kl(d / 5, q)

    def invert():
        for q, d in zip(qs, ds):
            k.invert_binary_kl(q, d, 1e-12, 200)

    def channel_stats():
        for c in chans:
            k.channel_stats(c)

    def dv_min():
        for q, d in zip(qs[:500], ds[:500]):
            k.dv_min(q, d, betas)

    def suite():
        with using(k):
            run_suite(1000, 7)

    return {
        "binary_kl x2000": binary_kl,
        "invert_binary_kl x2000": invert,
        "channel_stats 6x6 x2000": channel_stats,
        "dv_min 200 betas x500": dv_min,
        "run_suite(1000)": suite,
    }


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels_c is None:
        print("compiled extension not built; only the pure-Python backend is available")
    py = workloads(_kernels_py)
    cy = workloads(_kernels_c) if _kernels_c else {}
    print(f"{'workload':<26}{'python [s]':>12}{'cython [s]':>12}{'speedup':>9}")
    for name, fn in py.items():
        tp = best(fn, args.repeat)
        if name in cy:
            tc = best(cy[name], args.repeat)
            print(f"{name:<26}{tp:>12.4f}{tc:>12.4f}{tp / tc:>8.1f}x")
        else:
            print(f"{name:<26}{tp:>12.4f}{'-':>12}{'-':>9}")


if __name__ == "__main__":
    main()
