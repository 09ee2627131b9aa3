#!/usr/bin/env python3
"""Benchmark the numba evolution kernel against the numpy fallback.

Runs the time-averaged evolution at a few horizons with both kernel
implementations and prints wall times and the speedup.  The numba
kernel is warmed up once so compilation time is excluded.
"""

import argparse
import math
import time

import numpy as np

from twophase_qw import ModelParams, QubitState, coin_entry_arrays
from twophase_qw import kernels


def run_once(impl, params: ModelParams, phi0: QubitState, horizon: int) -> float:
    n = 2 * horizon + 5
    center = horizon + 2
    L = np.zeros(n, dtype=np.complex128)
    R = np.zeros(n, dtype=np.complex128)
    L[center] = phi0.left
    R[center] = phi0.right
    a, b, c, d = coin_entry_arrays(params, np.arange(-center, n - center))
    acc = np.zeros(n, dtype=np.float64)
    t0 = time.perf_counter()
    impl(L, R, a, b, c, d, center, center, horizon, acc, True)
    return time.perf_counter() - t0


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--horizons", type=int, nargs="+", default=[1000, 5000, 10000])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    params = ModelParams(1.5 * math.pi, math.pi)
    phi0 = QubitState(1.0, 0.0)

    impls = {"numpy": kernels.evolve_accumulate_numpy}
    if kernels.evolve_accumulate_numba is not None:
        impls["numba"] = kernels.evolve_accumulate_numba
        run_once(kernels.evolve_accumulate_numba, params, phi0, 64)  # compile warm-up
    else:
        print("numba unavailable; benchmarking the numpy path only")

    print(f"{'horizon':>8} {'backend':>8} {'best (s)':>10}")
    best: dict[tuple[int, str], float] = {}
    for horizon in args.horizons:
        for name, impl in impls.items():
            t = min(run_once(impl, params, phi0, horizon) for _ in range(args.repeats))
            best[(horizon, name)] = t
            print(f"{horizon:>8} {name:>8} {t:>10.3f}")
        if "numba" in impls:
            speedup = best[(horizon, "numpy")] / best[(horizon, "numba")]
            print(f"{horizon:>8} {'speedup':>8} {speedup:>9.2f}x")


if __name__ == "__main__":
    main()
