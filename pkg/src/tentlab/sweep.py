"""Exhaustive orbit statistics over whole fixed-point grids.

For an integer bound N and q fractional bits the reachable states are the
magnitudes 0..N*2**q; this module reports, for every one of them, where its
trajectory settles.  The heavy lifting runs in a compiled kernel when one
was built (see :mod:`._kernels`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = ["GridOrbitStats", "grid_orbit_stats", "kernel_implementation"]


def kernel_implementation() -> str:
    """Which kernel path is active: "cython" or "pure-python"."""
    return _kernels.IMPLEMENTATION


@dataclass(frozen=True)
class GridOrbitStats:
    """Per-magnitude orbit facts for the slope-2 tent map on one grid.

    Arrays are indexed by magnitude (value = magnitude / 2**q).
    first_integer_step is -1 where the trajectory never reaches an integer.
    """

    bound: int
    q: int
    transient: np.ndarray
    period: np.ndarray
    first_integer_step: np.ndarray
    cycle_min: np.ndarray
    cycle_all_even: np.ndarray

    @property
    def states(self) -> int:
        return (self.bound << self.q) + 1


def grid_orbit_stats(bound: int, q: int) -> GridOrbitStats:
    transient, period, first_int, cycle_min, all_even = _kernels.grid_orbit_stats(
        bound, q
    )
    return GridOrbitStats(
        bound=bound,
        q=q,
        transient=transient,
        period=period,
        first_integer_step=first_int,
        cycle_min=cycle_min,
        cycle_all_even=all_even.astype(bool),
    )
