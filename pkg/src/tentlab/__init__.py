"""Finite-precision dynamics of the tent map.

Iterates x -> a*x / a*(N-x) under exact-rational, truncating fixed-point
binary, and IEEE floating arithmetic; detects the cycles every finite
representation must fall into; builds integer preimage forests and random
backward walks whose histograms recover the uniform invariant density the
exact map predicts.
"""

from .fixedbin import (
    FixedBinary,
    IntegerClass,
    PrecisionSpec,
    classify_integer,
    double_value,
    exact_decimal_string,
    parse_decimal,
    round_off,
    subtract_from,
    to_decimal_string,
    to_rational,
)
from .dynamics import (
    Backend,
    Binary32Backend,
    Binary64Backend,
    CycleNotFound,
    ErrorSeries,
    ExactBackend,
    FixedBackend,
    OrbitReport,
    TentParams,
    backend_from_label,
    detect_cycle,
    error_accumulation,
    iterate,
    nth_iterate_closed_form,
    sine_cycle_search,
    sine_map_step,
    tent_step,
)
from .preimage import (
    BackwardWalk,
    BasinForest,
    ForwardConsistencyReport,
    PreimagePair,
    backward_random_walk,
    forward_consistency_check,
    integer_basin_forest,
    preimages_of,
)
from .histogram import Histogram, build_histogram, uniformity_metrics
from .sweep import GridOrbitStats, grid_orbit_stats, kernel_implementation
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "FixedBinary", "IntegerClass", "PrecisionSpec", "classify_integer",
    "double_value", "exact_decimal_string", "parse_decimal", "round_off",
    "subtract_from", "to_decimal_string", "to_rational",
    "Backend", "Binary32Backend", "Binary64Backend", "CycleNotFound",
    "ErrorSeries", "ExactBackend", "FixedBackend", "OrbitReport",
    "TentParams", "backend_from_label", "detect_cycle", "error_accumulation",
    "iterate", "nth_iterate_closed_form", "sine_cycle_search", "sine_map_step",
    "tent_step",
    "BackwardWalk", "BasinForest", "ForwardConsistencyReport", "PreimagePair",
    "backward_random_walk", "forward_consistency_check",
    "integer_basin_forest", "preimages_of",
    "Histogram", "build_histogram", "uniformity_metrics",
    "GridOrbitStats", "grid_orbit_stats", "kernel_implementation",
    "SplitMix64",
    "__version__",
]
