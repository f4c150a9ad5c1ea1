"""Benchmark the JIT-compiled kernels against their pure-Python fallbacks.

Run:  python benchmarks/bench_kernels.py
With numba available, each kernel is timed both compiled and via its
``.py_func`` (the identical uncompiled source).  Under ZENOPATH_NO_NUMBA=1
only the fallback timing is reported.
"""

import time

import numpy as np

from zenopath import _kernels


def _time(func, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    n = 200_000
    dw = (2.0 * np.random.default_rng(0).integers(0, 2, n) - 1.0) * np.sqrt(1e-3)
    # zero initial momenta keep the extremal flow bounded over long horizons
    s0 = np.array([0.0, 0.4, 0.916, 0.0, 0.0, 0.0])

    cases = [
        ("zeno_walk", _kernels.zeno_walk,
         (0.0, 0.0, 1.0, 0.5, 54.77, 1e-3, n, 1e-15)),
        ("phase_rk4", _kernels.phase_rk4, (0.0, 1.0, 0.5, 0.5, 2e-3, n)),
        ("diffusive_walk", _kernels.diffusive_walk, (0.0, 0.0, 1.0, 0.5, 3.0, 1e-3, dw)),
        ("mlp_rk4", _kernels.mlp_rk4, (s0, 0.5, 1.0, 1e-3, n)),
    ]

    print(f"numba enabled: {_kernels.NUMBA_ENABLED}   ({n} steps per kernel)")
    header = f"{'kernel':<16}{'jit [s]':>12}{'python [s]':>14}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, func, args in cases:
        if _kernels.NUMBA_ENABLED:
            func(*args)  # compile outside the timing
            t_jit = _time(func, *args)
            t_py = _time(func.py_func, *args)
            print(f"{name:<16}{t_jit:>12.4f}{t_py:>14.4f}{t_py / t_jit:>9.1f}x")
        else:
            t_py = _time(func, *args)
            print(f"{name:<16}{'-':>12}{t_py:>14.4f}{'-':>10}")


if __name__ == "__main__":
    main()
