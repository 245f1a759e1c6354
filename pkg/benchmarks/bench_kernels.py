#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on a realistic workload through both implementations
and prints a timing table. The active path for library calls is selected by
the IFS_CONJ_NUMBA environment variable; this script always times both.

    python benchmarks/bench_kernels.py [--repeats 7]
"""

import argparse
import time

import numpy as np

from ifsconj import _kernels as K


def time_call(fn, *args, repeats=7):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    rng = np.random.default_rng(0)

    codes = np.array([1, 2], dtype=np.int64)
    ks = np.array([0.5, 0.3])
    cs = np.array([0.1, 0.1])
    bs = np.zeros(2)
    symbols = rng.integers(0, 2, 1_000_000).astype(np.int64)
    yield "orbit_chain (1e6 steps)", "orbit_chain", (codes, ks, cs, bs, symbols, 5.0)

    diags = np.array([[0.5, 0.3, 0.7], [0.25, 0.6, 0.4]])
    dsyms = rng.integers(0, 2, 200_000).astype(np.int64)
    yield "orbit_chain_diag (2e5 x R^3)", "orbit_chain_diag", (diags, dsyms, np.ones(3))

    xs = rng.uniform(-10, 10, 200_000)
    yield "fd_eval linear bridge (2e5 pts)", "fd_eval", (xs, 0.41, 0.73, 1.0, K.BRIDGE_LINEAR, 2048)
    yield "fd_eval power bridge (2e5 pts)", "fd_eval", (xs, 0.41, 0.73, 1.0, K.BRIDGE_POWER, 2048)

    grid = np.linspace(-10, 10, 2048)
    fx = 0.5 * grid + 0.2 * np.sin(grid)
    yield "pairwise_quotient_max (2048 pts)", "pairwise_quotient_max", (grid, fx)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if "numba" not in K.IMPLS:
        print("numba not importable; only the numpy path is available")

    print(f"{'workload':<36} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    print("-" * 73)
    for label, name, call_args in workloads():
        np_time = time_call(K.IMPLS["numpy"][name], *call_args, repeats=args.repeats)
        if "numba" in K.IMPLS:
            K.IMPLS["numba"][name](*call_args)  # JIT warmup outside the timer
            nb_time = time_call(K.IMPLS["numba"][name], *call_args, repeats=args.repeats)
            print(
                f"{label:<36} {np_time * 1e3:>10.2f}ms {nb_time * 1e3:>10.2f}ms "
                f"{np_time / nb_time:>8.1f}x"
            )
        else:
            print(f"{label:<36} {np_time * 1e3:>10.2f}ms {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
