"""Compare the compiled ranking kernel against the pure-numpy fallback.

Both kernels must return bit-identical results; this script checks that on
every workload and reports per-call timings.

Usage: python benchmarks/bench_kernels.py [--elections N] [--repeats R]
"""

import argparse
import time

import numpy as np

from replicator_elections.distributions import beta, uniform
from replicator_elections.election_core import cell_masses
from replicator_elections.kernels.numpy_kernel import rank_elections as numpy_rank

try:
    from replicator_elections.kernels._core import rank_elections as cython_rank
except ImportError:
    cython_rank = None


def make_workload(rng, n, k, dup_fraction, voters):
    pos = rng.random((n, k))
    if dup_fraction > 0:
        m = int(n * dup_fraction)
        pos[:m] = np.round(pos[:m] * 4) / 4  # force coincident positions
    pos.sort(axis=1)
    masses = cell_masses(pos, voters)
    return pos, masses, rng.random((n, k)), rng.random((n, k))


def bench(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--elections", type=int, default=100_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    workloads = [
        ("k=2 uniform, no ties", 2, 0.0, uniform(), 1),
        ("k=5 uniform, no ties", 5, 0.0, uniform(), 1),
        ("k=5 beta(2,2), 10% tied rows", 5, 0.1, beta(2.0, 2.0), 1),
        ("k=5 uniform, top-3", 5, 0.0, uniform(), 3),
        ("k=8 uniform, 50% tied rows", 8, 0.5, uniform(), 1),
    ]

    print(f"{args.elections} elections per call, best of {args.repeats}\n")
    print(f"{'workload':36} {'numpy':>10} {'cython':>10} {'speedup':>8}  identical")
    for name, k, dup, voters, h in workloads:
        pos, masses, ur, uk = make_workload(rng, args.elections, k, dup, voters)
        np_out, np_t = bench(numpy_rank, (pos, masses, True, ur, uk, h), args.repeats)
        if cython_rank is None:
            print(f"{name:36} {np_t * 1e3:8.1f}ms {'n/a':>10}")
            continue
        cy_out, cy_t = bench(cython_rank, (pos, masses, True, ur, uk, h), args.repeats)
        same = np.array_equal(np_out, cy_out)
        print(f"{name:36} {np_t * 1e3:8.1f}ms {cy_t * 1e3:8.1f}ms {np_t / cy_t:7.1f}x  {same}")
        if not same:
            raise SystemExit("kernel outputs diverged")
    if cython_rank is None:
        print("\ncompiled extension not built; fallback only")


if __name__ == "__main__":
    main()
