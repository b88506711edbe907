#!/usr/bin/env python3
"""Time the jitted kernels against their pure-numpy twins.

Run from the repository root:

    python benchmarks/bench_kernels.py

The jitted path is what the package dispatches to by default; setting
ZENOGEO_DISABLE_NUMBA=1 selects the numpy path everywhere.  This script
imports both implementations directly so one process can compare them.
"""
import time

import numpy as np

from zenogeo import kernels


def bench(fn, args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bloch_case(steps=200_000):
    w = 1.0
    M = np.zeros((4, 4))
    M[1, 2], M[2, 1] = -w, w
    y0 = np.array([1.0, 1.0, 0.0, 0.0])
    return (M, y0, 1e-4, steps)


def chart_case(n=8, steps=20_000):
    rng = np.random.default_rng(0)
    R = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = 0.5 * (R + R.conj().T)
    A = np.block([[H.imag, H.real], [-H.real, H.imag]])
    y0 = rng.standard_normal(2 * n)
    return (A, y0, 1e-4, steps)


def measurement_case(n=8, steps=200_000):
    rng = np.random.default_rng(1)
    V = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    V /= 1.01 * np.linalg.norm(V, 2)
    psi0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return (np.ascontiguousarray(V), np.ascontiguousarray(psi0), steps, 1000)


def chain_case(n=8, count=20_000):
    rng = np.random.default_rng(2)
    V = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    V /= 1.01 * np.linalg.norm(V, 2)
    return (np.ascontiguousarray(V), count)


CASES = [
    ("rk4 bloch flow (4d, 2e5 steps)", "rk4_linear_trajectory", bloch_case()),
    ("rk4 chart flow (16d, 2e4 steps)", "rk4_linear_trajectory", chart_case()),
    ("measured steps (8d, 2e5 steps)", "repeated_apply", measurement_case()),
    ("matrix chain (8x8, 2e4 factors)", "matrix_chain", chain_case()),
]


def main():
    if kernels.rk4_linear_trajectory_numba is None:
        print("numba path unavailable (disabled or not installed); timing numpy only")
    print(f"{'case':36s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for label, name, args in CASES:
        np_fn = getattr(kernels, f"{name}_numpy")
        nb_fn = getattr(kernels, f"{name}_numba")
        t_np = bench(np_fn, args)
        if nb_fn is None:
            print(f"{label:36s} {t_np * 1e3:9.1f}ms {'-':>10s} {'-':>8s}")
            continue
        nb_fn(*args)  # compile outside the timed region
        t_nb = bench(nb_fn, args)
        print(f"{label:36s} {t_np * 1e3:9.1f}ms {t_nb * 1e3:9.1f}ms {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
