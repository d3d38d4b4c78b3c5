"""Tent-map iteration under exact, fixed-point, and IEEE floating arithmetic.

The map is ``x -> a*x`` for ``x < N/2`` and ``a*(N - x)`` otherwise, on the
domain [0, N].  Four backends carry the state:

* ``rational`` - exact Fraction arithmetic, the reference dynamics;
* ``fixed:p,q`` - truncating fixed-point binary (see :mod:`.fixedbin`);
* ``f64`` / ``f32`` - IEEE binary64 / binary32 with round-to-nearest-even,
  every arithmetic operation rounding in the format.

With a = 2 and a representable N the fixed-point step is exact (a doubling
is a shift, the subtraction stays on the grid), so the only round-off in a
whole trajectory is the initial conversion of x0.  That single truncation is
enough to collapse every computed orbit onto a cycle of even integers while
the exact orbit stays aperiodic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Callable, Optional, Union

import numpy as np

from .fixedbin import (
    FixedBinary,
    PrecisionSpec,
    double_value,
    exact_decimal_string,
    parse_decimal,
    round_off,
    subtract_from,
    to_rational,
)

__all__ = [
    "TentParams",
    "Backend",
    "ExactBackend",
    "FixedBackend",
    "Binary64Backend",
    "Binary32Backend",
    "backend_from_label",
    "tent_step",
    "iterate",
    "nth_iterate_closed_form",
    "detect_cycle",
    "OrbitReport",
    "CycleNotFound",
    "ErrorSeries",
    "error_accumulation",
    "sine_map_step",
    "sine_cycle_search",
    "format_value",
]


@dataclass(frozen=True)
class TentParams:
    """Map parameters: domain bound N (domain is [0, bound]) and slope a."""

    bound: Fraction
    slope: Fraction = Fraction(2)

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))
        object.__setattr__(self, "slope", Fraction(self.slope))
        if self.bound <= 0:
            raise ValueError("domain bound must be positive")
        if self.slope <= 0:
            raise ValueError("slope must be positive")


def _round_half_even(x: Fraction) -> int:
    q, r = divmod(x.numerator, x.denominator)
    twice = 2 * r
    if twice > x.denominator or (twice == x.denominator and q % 2):
        q += 1
    return q


def _to_binary32(x: Fraction) -> np.float32:
    """Round a non-negative rational to the nearest binary32, ties to even.

    Goes straight from the rational to the 24-bit significand; converting
    through binary64 first could double-round.
    """
    if x < 0:
        raise ValueError("negative values are not supported")
    if x == 0:
        return np.float32(0.0)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    if Fraction(2) ** e > x:
        e -= 1
    elif Fraction(2) ** (e + 1) <= x:
        e += 1
    if e < -126:  # subnormal grid
        return np.float32(math.ldexp(_round_half_even(x * Fraction(2) ** 149), -149))
    m = _round_half_even(x * Fraction(2) ** (23 - e))
    if m == 1 << 24:
        m >>= 1
        e += 1
    if e > 127:
        raise OverflowError(f"{x} overflows binary32")
    return np.float32(math.ldexp(m, e - 23))


class Backend:
    """Arithmetic carrier for trajectories; see module docstring."""

    label: str

    def represent(self, x):
        raise NotImplementedError

    def to_fraction(self, state) -> Fraction:
        raise NotImplementedError

    def is_integer(self, state) -> bool:
        return self.to_fraction(state).denominator == 1

    def tent_stepper(self, params: TentParams) -> Callable:
        """One-step map bound to params, validated once."""
        raise NotImplementedError


class ExactBackend(Backend):
    label = "rational"

    def represent(self, x):
        x = Fraction(x)
        if x < 0:
            raise ValueError("domain is the non-negative reals")
        return x

    def to_fraction(self, state):
        return state

    def tent_stepper(self, params):
        bound, slope = params.bound, params.slope

        def step(x: Fraction) -> Fraction:
            if not 0 <= x <= bound:
                raise ValueError(f"{x} outside [0, {bound}]")
            return slope * x if 2 * x < bound else slope * (bound - x)

        return step


class FixedBackend(Backend):
    """Truncating fixed-point binary; exact stepping, slope 2 only."""

    def __init__(self, spec: PrecisionSpec):
        self.spec = spec

    @property
    def label(self):
        return f"fixed:{self.spec.p},{self.spec.q}"

    def represent(self, x):
        return round_off(Fraction(x), self.spec)

    def to_fraction(self, state):
        return to_rational(state)

    def tent_stepper(self, params):
        if params.slope != 2:
            raise ValueError(
                "fixed-point stepping is exact only for slope 2; "
                f"got slope {params.slope}"
            )
        spec = self.spec
        bound = params.bound
        scaled = bound * (1 << spec.q)
        if scaled.denominator != 1 or bound >= 1 << spec.p:
            raise ValueError(
                f"bound {bound} is not representable with p={spec.p}, q={spec.q}"
            )
        n_mag = scaled.numerator

        def step(x: FixedBinary) -> FixedBinary:
            if x.spec != spec:
                raise ValueError(f"state has format {x.spec}, backend uses {spec}")
            if x.magnitude > n_mag:
                raise ValueError(f"{x.value} outside [0, {bound}]")
            # branch on raw magnitudes so 2x never has to be materialized
            if x.magnitude << 1 < n_mag:
                return double_value(x)
            return double_value(subtract_from(bound, x))

        return step


class Binary64Backend(Backend):
    label = "f64"

    def represent(self, x):
        x = Fraction(x)
        if x < 0:
            raise ValueError("domain is the non-negative reals")
        return float(x)  # correctly rounded by int division

    def to_fraction(self, state):
        return Fraction(state)

    def is_integer(self, state):
        return state.is_integer()

    def tent_stepper(self, params):
        n = self.represent(params.bound)
        a = self.represent(params.slope)
        half = n / 2.0

        def step(x: float) -> float:
            if not 0.0 <= x <= n:
                raise ValueError(f"{x} outside [0, {n}]")
            return a * x if x < half else a * (n - x)

        return step


class Binary32Backend(Backend):
    label = "f32"

    def represent(self, x):
        return _to_binary32(Fraction(x))

    def to_fraction(self, state):
        return Fraction(float(state))

    def is_integer(self, state):
        return float(state).is_integer()

    def tent_stepper(self, params):
        n = self.represent(params.bound)
        a = self.represent(params.slope)
        half = n / np.float32(2.0)
        zero = np.float32(0.0)

        def step(x):
            if not zero <= x <= n:
                raise ValueError(f"{x} outside [0, {n}]")
            return a * x if x < half else a * (n - x)

        return step


def backend_from_label(label: str) -> Backend:
    """Parse "rational" | "fixed:p,q" | "f64" | "f32"."""
    if label == "rational":
        return ExactBackend()
    if label == "f64":
        return Binary64Backend()
    if label == "f32":
        return Binary32Backend()
    if label.startswith("fixed:"):
        try:
            p, q = (int(part) for part in label[len("fixed:"):].split(","))
        except ValueError:
            raise ValueError(f"malformed fixed-point backend label: {label!r}")
        return FixedBackend(PrecisionSpec(p, q))
    raise ValueError(f"unknown backend label: {label!r}")


def format_value(backend_label: str, v: Fraction) -> str:
    """Serialize a state value: shortest float repr for the float backends
    (lossless round-trip), exact decimal or num/den otherwise."""
    if backend_label in ("f64", "f32"):
        return repr(float(v))
    return exact_decimal_string(v)


def _as_fraction(x0) -> tuple[str, Fraction]:
    if isinstance(x0, str):
        return x0, parse_decimal(x0)
    frac = Fraction(x0)
    return exact_decimal_string(frac), frac


def tent_step(x, params: TentParams, backend: Backend):
    """Apply one tent-map step to an already-represented state."""
    return backend.tent_stepper(params)(x)


def iterate(x0, params: TentParams, backend: Backend, steps: int) -> list:
    """Trajectory [x0 as represented, ..., step^steps(x0)], length steps + 1.

    x0 may be a decimal string, int, or Fraction; non-exact backends round it
    once at t = 0, which is the only round-off a slope-2 fixed-point run ever
    sees.
    """
    if steps < 0:
        raise ValueError("step count must be >= 0")
    _, frac = _as_fraction(x0)
    state = backend.represent(frac)
    step = backend.tent_stepper(params)
    traj = [state]
    for _ in range(steps):
        state = step(state)
        traj.append(state)
    return traj


def nth_iterate_closed_form(x: Fraction, n: int, params: TentParams) -> Fraction:
    """n-th iterate in closed form: the 2**n-piece sawtooth of slope ±2**n.

    Folding u = 2**n * x / N into [0, 2] and scaling back by N is the whole
    map; equals n-fold composition exactly (checked against the rational
    backend in the tests).  Slope must be 2.
    """
    if params.slope != 2:
        raise ValueError("closed form holds for slope 2 only")
    if n < 1:
        raise ValueError("iterate count must be >= 1")
    x = Fraction(x)
    if not 0 <= x <= params.bound:
        raise ValueError(f"{x} outside [0, {params.bound}]")
    u = x * (1 << n) / params.bound
    r = u - 2 * (u // 2)
    return params.bound * r if r <= 1 else params.bound * (2 - r)


@dataclass(frozen=True)
class OrbitReport:
    """Where a computed trajectory settles: transient, period, cycle values.

    The cycle is listed in orbit order starting from its first-visited
    element, held as exact rationals regardless of backend.
    """

    x0_given: str
    x0_represented: Fraction
    backend: str
    transient: int
    period: int
    cycle: tuple[Fraction, ...]
    first_integer_step: Optional[int]
    even_cycle: bool

    def to_json_dict(self) -> dict:
        return {
            "x0_given": self.x0_given,
            "x0_represented": format_value(self.backend, self.x0_represented),
            "backend": self.backend,
            "transient": self.transient,
            "period": self.period,
            "cycle": [format_value(self.backend, v) for v in self.cycle],
            "first_integer_step": self.first_integer_step,
            "even_cycle": self.even_cycle,
        }


@dataclass(frozen=True)
class CycleNotFound:
    """Budget ran out before any state was revisited; a finding, not an error."""

    x0_given: str
    x0_represented: Fraction
    backend: str
    max_steps: int
    first_integer_step: Optional[int]

    def to_json_dict(self) -> dict:
        return {
            "x0_given": self.x0_given,
            "x0_represented": format_value(self.backend, self.x0_represented),
            "backend": self.backend,
            "max_steps": self.max_steps,
            "first_integer_step": self.first_integer_step,
            "outcome": "no-revisit-within-budget",
        }


CycleSearchResult = Union[OrbitReport, CycleNotFound]


def _search_cycle(state0, step, to_fraction, is_integer, max_steps):
    """Visited-state cycle search: exact transient and period on first revisit."""
    seen = {state0: 0}
    first_int = 0 if is_integer(state0) else None
    cur = state0
    t = 0
    while t < max_steps:
        cur = step(cur)
        t += 1
        prev = seen.get(cur)
        if prev is not None:
            period = t - prev
            cyc = [cur]
            for _ in range(period - 1):
                cyc.append(step(cyc[-1]))
            return prev, period, tuple(to_fraction(c) for c in cyc), first_int
        seen[cur] = t
        if first_int is None and is_integer(cur):
            first_int = t
    return None, None, None, first_int


def detect_cycle(x0, params: TentParams, backend: Backend,
                 max_steps: int) -> CycleSearchResult:
    """Run until a state repeats (or the budget runs out) and report.

    Every non-exact backend has finitely many states, so a repeat is
    guaranteed eventually; max_steps bounds the search (and the memory of
    the visited index) and is the only guard when the backend is exact.
    """
    given, frac = _as_fraction(x0)
    state0 = backend.represent(frac)
    step = backend.tent_stepper(params)
    transient, period, cycle, first_int = _search_cycle(
        state0, step, backend.to_fraction, backend.is_integer, max_steps
    )
    represented = backend.to_fraction(state0)
    if transient is None:
        return CycleNotFound(given, represented, backend.label, max_steps, first_int)
    even = all(v.denominator == 1 and v.numerator % 2 == 0 for v in cycle)
    return OrbitReport(
        x0_given=given,
        x0_represented=represented,
        backend=backend.label,
        transient=transient,
        period=period,
        cycle=cycle,
        first_integer_step=first_int,
        even_cycle=even,
    )


@dataclass(frozen=True)
class ErrorSeries:
    """Per-step |computed - exact| deviations and their running sum."""

    deviations: tuple[Fraction, ...]
    totals: tuple[Fraction, ...]

    @property
    def final(self) -> Fraction:
        return self.totals[-1]

    def csv_rows(self):
        for t, total in enumerate(self.totals):
            yield t, exact_decimal_string(total)


def error_accumulation(x0, params: TentParams, backend: Backend,
                       T: int) -> ErrorSeries:
    """Accumulated deviation of a computed trajectory from the exact orbit.

    The exact orbit starts at x0 itself; the computed one at the backend's
    representation of x0, so the t = 0 deviation is the initial round-off.
    """
    if T < 0:
        raise ValueError("horizon must be >= 0")
    _, frac = _as_fraction(x0)
    exact_traj = iterate(frac, params, ExactBackend(), T)
    comp_traj = iterate(frac, params, backend, T)
    devs = tuple(
        abs(backend.to_fraction(c) - e) for c, e in zip(comp_traj, exact_traj)
    )
    return ErrorSeries(deviations=devs, totals=tuple(accumulate(devs)))


def sine_map_step(y: float) -> float:
    """One step of y -> sin(pi * y) on [0, 1] in binary64."""
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"{y} outside [0, 1]")
    return math.sin(math.pi * y)


def sine_cycle_search(y0: float, max_steps: int) -> CycleSearchResult:
    """Cycle search for the binary64 sine map (spurious-convergence probe)."""
    state0 = float(y0)
    if not 0.0 <= state0 <= 1.0:
        raise ValueError(f"{y0} outside [0, 1]")
    transient, period, cycle, first_int = _search_cycle(
        state0, sine_map_step, Fraction, float.is_integer, max_steps
    )
    if transient is None:
        return CycleNotFound(repr(y0), Fraction(state0), "f64", max_steps, first_int)
    even = all(v.denominator == 1 and v.numerator % 2 == 0 for v in cycle)
    return OrbitReport(repr(y0), Fraction(state0), "f64", transient, period,
                       cycle, first_int, even)
