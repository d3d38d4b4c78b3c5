#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Covers the two hot paths: whole-grid orbit statistics (the exhaustive
even-cycle sweeps) and Brent cycle hunts on binary64 orbits.  Results from
the two implementations are asserted equal before timings are reported.

Usage: python benchmarks/compare_kernels.py
"""

import time

import numpy as np

from tentlab import _purepath

try:
    from tentlab import _fastpath
except ImportError:
    _fastpath = None


def best_of(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, fast_fn, pure_fn, check_equal):
    t_pure, r_pure = best_of(pure_fn)
    if _fastpath is None:
        print(f"{name:38s} pure {t_pure * 1e3:9.2f} ms   (no compiled kernel)")
        return
    t_fast, r_fast = best_of(fast_fn)
    check_equal(r_fast, r_pure)
    speedup = t_pure / t_fast if t_fast > 0 else float("inf")
    print(f"{name:38s} pure {t_pure * 1e3:9.2f} ms   "
          f"cython {t_fast * 1e3:9.2f} ms   x{speedup:,.1f}")


def arrays_equal(a, b):
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def tuples_equal(a, b):
    assert a == b


def main():
    print("tentlab kernel benchmark (best of 3)\n")
    for n, q in [(16, 8), (16, 12), (100, 0), (7, 14)]:
        states = (n << q) + 1
        bench(
            f"grid_orbit_stats N={n:<3} q={q:<2} ({states} states)",
            (lambda n=n, q=q: _fastpath.grid_orbit_stats(n, q)) if _fastpath else None,
            lambda n=n, q=q: _purepath.grid_orbit_stats(n, q),
            arrays_equal,
        )
    bench(
        "tent_cycle_f64 x0=67.2 N=100",
        (lambda: _fastpath.tent_cycle_f64(67.2, 100.0, 10**6)) if _fastpath else None,
        lambda: _purepath.tent_cycle_f64(67.2, 100.0, 10**6),
        tuples_equal,
    )
    bench(
        "sine_orbit_probe 2e5 steps",
        (lambda: _fastpath.sine_orbit_probe(0.4, 200_000)) if _fastpath else None,
        lambda: _purepath.sine_orbit_probe(0.4, 200_000),
        tuples_equal,
    )
    bench(
        "sine_cycle_f64 budget 2e5",
        (lambda: _fastpath.sine_cycle_f64(0.4, 200_000)) if _fastpath else None,
        lambda: _purepath.sine_cycle_f64(0.4, 200_000),
        tuples_equal,
    )


if __name__ == "__main__":
    main()
