"""Kernel selection: compiled _fastpath when available, pure Python otherwise.

Set TENTLAB_PURE=1 to force the pure path (useful for the benchmark and for
checking the two implementations against each other).
"""

from __future__ import annotations

import os

if os.environ.get("TENTLAB_PURE"):
    from . import _purepath as _impl
else:
    try:
        from . import _fastpath as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _purepath as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
MAX_GRID_STATES = _impl.MAX_GRID_STATES
grid_orbit_stats = _impl.grid_orbit_stats
tent_cycle_f64 = _impl.tent_cycle_f64
sine_cycle_f64 = _impl.sine_cycle_f64
tent_orbit_probe = _impl.tent_orbit_probe
sine_orbit_probe = _impl.sine_orbit_probe
