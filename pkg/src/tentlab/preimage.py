"""Inverse iteration: preimage pairs, integer basin forests, backward walks.

Under slope 2 every point x of [0, N] has the two preimages x/2 and N - x/2
(one from each linear branch, merging at x = N).  Running this choice
backwards with a coin flip per step builds a sequence that statistically
mimics the chaotic forward dynamics, and reversing it gives a genuine exact
trajectory segment - one that finite-precision forward iteration immediately
abandons for an even-integer cycle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dynamics import (
    CycleSearchResult,
    ExactBackend,
    FixedBackend,
    OrbitReport,
    TentParams,
    detect_cycle,
)
from .fixedbin import PrecisionSpec
from .rng import SplitMix64

__all__ = [
    "PreimagePair",
    "preimages_of",
    "BasinForest",
    "integer_basin_forest",
    "BackwardWalk",
    "backward_random_walk",
    "ForwardConsistencyReport",
    "forward_consistency_check",
    "DEFAULT_CAP_BITS",
]

log = logging.getLogger(__name__)

DEFAULT_CAP_BITS = 4096


@dataclass(frozen=True)
class PreimagePair:
    """The two slope-2 preimages of a point: left = x/2, right = N - x/2."""

    left: Fraction
    right: Fraction


def _require_slope_two(params: TentParams):
    if params.slope != 2:
        raise ValueError("preimage branches are implemented for slope 2 only")


def preimages_of(x: Fraction, params: TentParams) -> PreimagePair:
    """Both preimages of x; they coincide (at N/2) exactly when x = N."""
    _require_slope_two(params)
    x = Fraction(x)
    if not 0 <= x <= params.bound:
        raise ValueError(f"{x} outside [0, {params.bound}]")
    half = x / 2
    return PreimagePair(left=half, right=params.bound - half)


@dataclass
class BasinForest:
    """All integers whose forward orbit reaches a given integer cycle.

    Nodes hang off the cycle by preimage edges: the parent of a node is its
    forward image, depth is the distance to the cycle (cycle nodes have
    depth 0).  Odd nodes have no integer preimages, so they are always
    leaves.
    """

    cycle: tuple[int, ...]
    bound: int
    parent: dict[int, int]  # node -> tent(node); cycle nodes excluded
    depth: dict[int, int]  # every node, cycle nodes at 0

    @property
    def nodes(self) -> set[int]:
        return set(self.depth)

    def edge_rows(self):
        """(parent, child, depth-of-child) rows, deterministic order."""
        for child in sorted(self.parent):
            yield self.parent[child], child, self.depth[child]

    def render_text(self) -> str:
        """Indented preimage tree, cycle elements at the left margin."""
        children: dict[int, list[int]] = {}
        for child, par in self.parent.items():
            children.setdefault(par, []).append(child)
        lines = []

        def walk(node, indent):
            lines.append("  " * indent + str(node))
            for ch in sorted(children.get(node, ())):
                walk(ch, indent + 1)

        for c in self.cycle:
            lines.append(f"[cycle] {c}")
            for ch in sorted(children.get(c, ())):
                walk(ch, 1)
        return "\n".join(lines)


def _integer_tent(v: int, n: int) -> int:
    return 2 * v if 2 * v < n else 2 * (n - v)


def integer_basin_forest(cycle, n: int) -> BasinForest:
    """Breadth-first integer preimages of a cycle of the slope-2 map on [0, n].

    Only even values have integer preimages (v/2 and n - v/2); enumeration
    stops when no new integers appear.  Raises if the given values do not
    form one genuine cycle of the map.
    """
    cycle_set = set(int(c) for c in cycle)
    if not cycle_set:
        raise ValueError("cycle must be non-empty")
    if any(not 0 <= c <= n for c in cycle_set):
        raise ValueError(f"cycle values outside [0, {n}]")
    # verify: following the map from any element walks the whole set and closes
    start = min(cycle_set)
    orbit = [start]
    v = _integer_tent(start, n)
    while v != start:
        if v not in cycle_set or len(orbit) > len(cycle_set):
            raise ValueError(f"{sorted(cycle_set)} is not a cycle of the map")
        orbit.append(v)
        v = _integer_tent(v, n)
    if len(orbit) != len(cycle_set):
        raise ValueError(f"{sorted(cycle_set)} is not a single cycle of the map")

    depth = {c: 0 for c in orbit}
    parent: dict[int, int] = {}
    frontier = list(orbit)
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            if v % 2:
                continue  # odd values have no integer preimages
            for pre in (v // 2, n - v // 2):
                if pre not in depth:
                    depth[pre] = d
                    parent[pre] = v
                    nxt.append(pre)
        frontier = nxt
    return BasinForest(cycle=tuple(orbit), bound=n, parent=parent, depth=depth)


@dataclass
class BackwardWalk:
    """A random inverse-orbit: values x_0, x_-1, ..., x_-steps with choices.

    choices[k] is the coin flip for step k+1 (0 = lower preimage x/2,
    1 = upper preimage N - x/2).  Values are exact rationals; once a
    denominator outgrows the precision cap the value is truncated onto the
    2**-cap_bits grid and the walk is no longer exactly invertible from
    that point on (truncated_from records the first such step).
    """

    seed: int
    start: Fraction
    params: TentParams
    values: tuple[Fraction, ...]
    choices: tuple[int, ...]
    cap_bits: int
    truncated_from: Optional[int]

    @property
    def steps(self) -> int:
        return len(self.choices)

    def csv_rows(self):
        """(step, value, choice) rows; values as shortest-roundtrip floats
        for display (exact values live on the object)."""
        yield 0, repr(float(self.values[0])), ""
        for k in range(1, len(self.values)):
            yield -k, repr(float(self.values[k])), self.choices[k - 1]


def backward_random_walk(start, steps: int, seed: int, params: TentParams,
                         cap_bits: int = DEFAULT_CAP_BITS) -> BackwardWalk:
    """Walk `steps` random preimages back from `start`, deterministically.

    One SplitMix64 bit is consumed per step even when the two preimages
    coincide (x = N), so choice sequences stay aligned across starts.
    """
    _require_slope_two(params)
    if steps < 1:
        raise ValueError("walk needs at least one step")
    start = Fraction(start)
    if not 0 <= start <= params.bound:
        raise ValueError(f"{start} outside [0, {params.bound}]")
    cap_den = 1 << cap_bits
    rng = SplitMix64(seed)
    x = start
    values = [x]
    choices = []
    truncated_from = None
    truncations = 0
    for k in range(1, steps + 1):
        bit = rng.next_bit()
        choices.append(bit)
        x = x / 2 if bit == 0 else params.bound - x / 2
        if x.denominator > cap_den:
            x = Fraction(x.numerator * cap_den // x.denominator, cap_den)
            truncations += 1
            if truncated_from is None:
                truncated_from = k
                log.warning(
                    "backward walk (seed=%d) exceeded the %d-bit precision cap "
                    "at step %d; values are truncated from here on", seed,
                    cap_bits, k,
                )
        values.append(x)
    if truncations:
        log.info("backward walk (seed=%d): %d of %d steps truncated",
                 seed, truncations, steps)
    return BackwardWalk(
        seed=seed,
        start=start,
        params=params,
        values=tuple(values),
        choices=tuple(choices),
        cap_bits=cap_bits,
        truncated_from=truncated_from,
    )


@dataclass(frozen=True)
class ForwardConsistencyReport:
    """Forward re-run of a backward walk, exact and in fixed point.

    Exact iteration from the oldest point x_-steps must retrace the walk
    term for term (the branches invert each other).  Fixed-point iteration
    from its rounded image loses the trajectory immediately and ends in a
    cycle; first_divergence_step is the first index where the two differ
    and forward_result is where the fixed-point run settles.
    """

    reproduced_exactly: bool
    first_divergence_step: Optional[int]
    forward_result: CycleSearchResult

    @property
    def even_cycle(self) -> bool:
        return isinstance(self.forward_result, OrbitReport) and \
            self.forward_result.even_cycle


def forward_consistency_check(walk: BackwardWalk, spec: PrecisionSpec,
                              max_steps: int = 100_000) -> ForwardConsistencyReport:
    """Check that a walk reverses into a real trajectory and that fixed-point
    forwarding abandons it (see class docstring)."""
    if walk.truncated_from is not None:
        raise ValueError(
            "walk was truncated at the precision cap; forward reproduction "
            "is only exact below it - use a shorter walk"
        )
    forward = list(reversed(walk.values))  # x_-steps ... x_0
    step = ExactBackend().tent_stepper(walk.params)
    reproduced = True
    x = forward[0]
    for expect in forward[1:]:
        x = step(x)
        if x != expect:
            reproduced = False
            break

    backend = FixedBackend(spec)
    fixed_step = backend.tent_stepper(walk.params)
    state = backend.represent(forward[0])
    first_div = None
    for t, expect in enumerate(forward):
        if backend.to_fraction(state) != expect:
            first_div = t
            break
        if t < len(forward) - 1:
            state = fixed_step(state)
    result = detect_cycle(forward[0], walk.params, backend, max_steps)
    return ForwardConsistencyReport(
        reproduced_exactly=reproduced,
        first_divergence_step=first_div,
        forward_result=result,
    )
