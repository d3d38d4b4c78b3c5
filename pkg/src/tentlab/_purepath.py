"""Pure-Python kernels; same contract as the compiled _fastpath module.

The grid kernel treats the fixed-point tent map as a functional graph on
magnitudes 0..N*2**q and resolves transient/period/cycle facts for every
node in O(states) by walking each unexplored chain once.
"""

from __future__ import annotations

import math

import numpy as np

IMPLEMENTATION = "pure-python"

MAX_GRID_STATES = 1 << 26


def grid_orbit_stats(n: int, q: int):
    """Orbit statistics for every grid magnitude under the slope-2 tent map.

    Returns (transient, period, first_integer_step, cycle_min, cycle_all_even)
    int64/uint8 arrays indexed by magnitude; first_integer_step is -1 for
    states that never reach an integer value.
    """
    if n < 1 or q < 0:
        raise ValueError("need integer bound n >= 1 and q >= 0")
    n_scaled = n << q
    states = n_scaled + 1
    if states > MAX_GRID_STATES:
        raise ValueError(f"{states} grid states exceed the kernel limit")
    succ = [0] * states
    for s in range(states):
        two = s << 1
        succ[s] = two if two < n_scaled else (n_scaled - s) << 1

    transient = [0] * states
    period = [0] * states
    cycle_min = [0] * states
    all_even = bytearray(states)
    color = bytearray(states)  # 0 new, 1 on current path, 2 resolved
    pos = [0] * states
    mask = (1 << q) - 1

    for s0 in range(states):
        if color[s0]:
            continue
        path = []
        v = s0
        while color[v] == 0:
            color[v] = 1
            pos[v] = len(path)
            path.append(v)
            v = succ[v]
        if color[v] == 1:  # new cycle closed inside the current path
            i = pos[v]
            cyc = path[i:]
            lam = len(cyc)
            even = int(all(
                (c & mask) == 0 and ((c >> q) & 1) == 0 for c in cyc
            ))
            mn = min(cyc)
            for c in cyc:
                transient[c] = 0
                period[c] = lam
                cycle_min[c] = mn
                all_even[c] = even
                color[c] = 2
            del path[i:]
        for j in range(len(path) - 1, -1, -1):
            u = path[j]
            w = succ[u]
            transient[u] = transient[w] + 1
            period[u] = period[w]
            cycle_min[u] = cycle_min[w]
            all_even[u] = all_even[w]
            color[u] = 2

    first_int = [-2] * states  # -2 unknown, -3 on path, -1 never, >=0 steps
    for s0 in range(states):
        if first_int[s0] != -2:
            continue
        path = []
        v = s0
        while True:
            tag = first_int[v]
            if tag == -3:  # integer-free cycle closed in the current path
                i = pos[v]
                for u in path[i:]:
                    first_int[u] = -1
                del path[i:]
                base = -1
                break
            if tag != -2:
                base = tag
                break
            if v & mask == 0:
                first_int[v] = 0
                base = 0
                break
            first_int[v] = -3
            pos[v] = len(path)
            path.append(v)
            v = succ[v]
        val = base
        for u in reversed(path):
            val = -1 if val < 0 else val + 1
            first_int[u] = val

    return (
        np.array(transient, dtype=np.int64),
        np.array(period, dtype=np.int64),
        np.array(first_int, dtype=np.int64),
        np.array(cycle_min, dtype=np.int64),
        np.frombuffer(bytes(all_even), dtype=np.uint8).copy(),
    )


def _brent(f, x0, max_steps: int):
    """Brent cycle search: (transient, period, found) in O(1) memory.

    The budget caps map evaluations during the period search, so "not
    found" means no revisit within roughly max_steps steps.
    """
    power = 1
    lam = 1
    evals = 1
    tortoise = x0
    hare = f(x0)
    while tortoise != hare:
        if evals >= max_steps:
            return -1, -1, False
        if power == lam:
            tortoise = hare
            power <<= 1
            lam = 0
        hare = f(hare)
        evals += 1
        lam += 1
    hare = x0
    for _ in range(lam):
        hare = f(hare)
    tortoise = x0
    mu = 0
    while tortoise != hare:
        tortoise = f(tortoise)
        hare = f(hare)
        mu += 1
    return mu, lam, True


def _tent_f64(n: float):
    half = n / 2.0

    def step(x):
        return 2.0 * x if x < half else 2.0 * (n - x)

    return step


def _sine_f64(y: float) -> float:
    return math.sin(math.pi * y)


def tent_cycle_f64(x0: float, n: float, max_steps: int):
    return _brent(_tent_f64(n), x0, max_steps)


def sine_cycle_f64(y0: float, max_steps: int):
    return _brent(_sine_f64, y0, max_steps)


def tent_orbit_probe(x0: float, n: float, steps: int) -> float:
    """Value after `steps` binary64 tent steps (kernel-equivalence probe)."""
    step = _tent_f64(n)
    x = x0
    for _ in range(steps):
        x = step(x)
    return x


def sine_orbit_probe(y0: float, steps: int) -> float:
    y = y0
    for _ in range(steps):
        y = _sine_f64(y)
    return y
