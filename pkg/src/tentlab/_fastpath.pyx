# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as the pure-Python _purepath module."""

import numpy as np

from libc.math cimport sin, M_PI

IMPLEMENTATION = "cython"

MAX_GRID_STATES = 1 << 26


def grid_orbit_stats(long long n, int q):
    """Orbit statistics for every grid magnitude under the slope-2 tent map.

    Returns (transient, period, first_integer_step, cycle_min, cycle_all_even)
    arrays indexed by magnitude; first_integer_step is -1 for states that
    never reach an integer value.
    """
    if n < 1 or q < 0:
        raise ValueError("need integer bound n >= 1 and q >= 0")
    cdef long long n_scaled = n << q
    cdef long long states = n_scaled + 1
    if states > MAX_GRID_STATES:
        raise ValueError(f"{states} grid states exceed the kernel limit")

    succ_arr = np.empty(states, dtype=np.int64)
    transient_arr = np.zeros(states, dtype=np.int64)
    period_arr = np.zeros(states, dtype=np.int64)
    first_int_arr = np.full(states, -2, dtype=np.int64)
    cycle_min_arr = np.zeros(states, dtype=np.int64)
    all_even_arr = np.zeros(states, dtype=np.uint8)
    color_arr = np.zeros(states, dtype=np.uint8)
    pos_arr = np.zeros(states, dtype=np.int64)
    path_arr = np.empty(states, dtype=np.int64)

    cdef long long[::1] succ = succ_arr
    cdef long long[::1] transient = transient_arr
    cdef long long[::1] period = period_arr
    cdef long long[::1] first_int = first_int_arr
    cdef long long[::1] cycle_min = cycle_min_arr
    cdef unsigned char[::1] all_even = all_even_arr
    cdef unsigned char[::1] color = color_arr
    cdef long long[::1] pos = pos_arr
    cdef long long[::1] path = path_arr

    cdef long long s, two, s0, v, u, w, top, i, j, lam, mn, c, base, val, tag
    cdef long long mask = (<long long> 1 << q) - 1
    cdef int even

    for s in range(states):
        two = s << 1
        succ[s] = two if two < n_scaled else (n_scaled - s) << 1

    for s0 in range(states):
        if color[s0]:
            continue
        top = 0
        v = s0
        while color[v] == 0:
            color[v] = 1
            pos[v] = top
            path[top] = v
            top += 1
            v = succ[v]
        if color[v] == 1:  # new cycle closed inside the current path
            i = pos[v]
            lam = top - i
            even = 1
            mn = path[i]
            for j in range(i, top):
                c = path[j]
                if c < mn:
                    mn = c
                if (c & mask) != 0 or ((c >> q) & 1) != 0:
                    even = 0
            for j in range(i, top):
                c = path[j]
                transient[c] = 0
                period[c] = lam
                cycle_min[c] = mn
                all_even[c] = even
                color[c] = 2
            top = i
        for j in range(top - 1, -1, -1):
            u = path[j]
            w = succ[u]
            transient[u] = transient[w] + 1
            period[u] = period[w]
            cycle_min[u] = cycle_min[w]
            all_even[u] = all_even[w]
            color[u] = 2

    for s0 in range(states):
        if first_int[s0] != -2:
            continue
        top = 0
        v = s0
        while True:
            tag = first_int[v]
            if tag == -3:  # integer-free cycle closed in the current path
                i = pos[v]
                for j in range(i, top):
                    first_int[path[j]] = -1
                top = i
                base = -1
                break
            if tag != -2:
                base = tag
                break
            if (v & mask) == 0:
                first_int[v] = 0
                base = 0
                break
            first_int[v] = -3
            pos[v] = top
            path[top] = v
            top += 1
            v = succ[v]
        val = base
        for j in range(top - 1, -1, -1):
            val = -1 if val < 0 else val + 1
            first_int[path[j]] = val

    return transient_arr, period_arr, first_int_arr, cycle_min_arr, all_even_arr


cdef inline double _tent(double x, double n, double half) nogil:
    return 2.0 * x if x < half else 2.0 * (n - x)


cdef inline double _sine(double y) nogil:
    return sin(M_PI * y)


def tent_cycle_f64(double x0, double n, long long max_steps):
    """Brent cycle search on the binary64 tent map: (transient, period, found)."""
    cdef double half = n / 2.0
    cdef long long power = 1, lam = 1, evals = 1, mu = 0, k
    cdef double tortoise = x0
    cdef double hare = _tent(x0, n, half)
    while tortoise != hare:
        if evals >= max_steps:
            return -1, -1, False
        if power == lam:
            tortoise = hare
            power <<= 1
            lam = 0
        hare = _tent(hare, n, half)
        evals += 1
        lam += 1
    hare = x0
    for k in range(lam):
        hare = _tent(hare, n, half)
    tortoise = x0
    while tortoise != hare:
        tortoise = _tent(tortoise, n, half)
        hare = _tent(hare, n, half)
        mu += 1
    return mu, lam, True


def sine_cycle_f64(double y0, long long max_steps):
    """Brent cycle search on the binary64 sine map: (transient, period, found)."""
    cdef long long power = 1, lam = 1, evals = 1, mu = 0, k
    cdef double tortoise = y0
    cdef double hare = _sine(y0)
    while tortoise != hare:
        if evals >= max_steps:
            return -1, -1, False
        if power == lam:
            tortoise = hare
            power <<= 1
            lam = 0
        hare = _sine(hare)
        evals += 1
        lam += 1
    hare = y0
    for k in range(lam):
        hare = _sine(hare)
    tortoise = y0
    while tortoise != hare:
        tortoise = _sine(tortoise)
        hare = _sine(hare)
        mu += 1
    return mu, lam, True


def tent_orbit_probe(double x0, double n, long long steps):
    """Value after `steps` binary64 tent steps (kernel-equivalence probe)."""
    cdef double half = n / 2.0
    cdef double x = x0
    cdef long long t
    for t in range(steps):
        x = _tent(x, n, half)
    return x


def sine_orbit_probe(double y0, long long steps):
    cdef double y = y0
    cdef long long t
    for t in range(steps):
        y = _sine(y)
    return y
