"""Tent-map stepping, closed form, cycle detection, error accumulation."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from tentlab.dynamics import (
    Binary32Backend,
    Binary64Backend,
    CycleNotFound,
    ExactBackend,
    FixedBackend,
    OrbitReport,
    TentParams,
    _to_binary32,
    backend_from_label,
    detect_cycle,
    error_accumulation,
    iterate,
    nth_iterate_closed_form,
    sine_cycle_search,
    sine_map_step,
    tent_step,
)
from tentlab.fixedbin import PrecisionSpec, to_decimal_string

N100 = TentParams(bound=Fraction(100))
N1 = TentParams(bound=Fraction(1))
EXACT = ExactBackend()
F64 = Binary64Backend()
F32 = Binary32Backend()
FIVE_BIT = FixedBackend(PrecisionSpec(1, 4))


# --- single steps ---------------------------------------------------------------

def test_exact_steps():
    assert tent_step(Fraction(19), N100, EXACT) == 38
    assert tent_step(Fraction(38), N100, EXACT) == 76
    assert tent_step(Fraction(76), N100, EXACT) == 48
    assert tent_step(Fraction(50), N100, EXACT) == 100
    assert tent_step(Fraction(100), N100, EXACT) == 0


def test_fixed_step_three_quarters():
    # 2 * (1 - 0.75) lands on 0.5 in one move
    state = FIVE_BIT.represent(Fraction(3, 4))
    out = tent_step(state, N1, FIVE_BIT)
    assert out.bits == "0.1000" and to_decimal_string(out) == "0.5"


def test_step_domain_violation():
    with pytest.raises(ValueError):
        tent_step(Fraction(101), N100, EXACT)
    with pytest.raises(ValueError):
        tent_step(-0.5, N100, F64)


def test_fixed_backend_validation():
    with pytest.raises(ValueError):  # slope other than 2
        FIVE_BIT.tent_stepper(TentParams(bound=Fraction(1), slope=Fraction(3)))
    with pytest.raises(ValueError):  # bound not representable
        FixedBackend(PrecisionSpec(1, 4)).tent_stepper(N100)
    with pytest.raises(ValueError):  # bound off the grid
        FixedBackend(PrecisionSpec(8, 2)).tent_stepper(
            TentParams(bound=Fraction(1, 3)))
    step = FIVE_BIT.tent_stepper(N1)
    with pytest.raises(ValueError):  # state from another format
        step(FixedBackend(PrecisionSpec(2, 3)).represent(Fraction(1, 2)))


def test_exact_backend_accepts_other_slopes():
    params = TentParams(bound=Fraction(1), slope=Fraction(3, 2))
    assert tent_step(Fraction(1, 2), params, EXACT) == Fraction(3, 4)


# --- trajectories ----------------------------------------------------------------

def test_iterate_five_bit():
    traj = iterate("0.4", N1, FIVE_BIT, 6)
    assert [to_decimal_string(s) for s in traj] == \
        ["0.375", "0.75", "0.5", "1", "0", "0", "0"]


def test_iterate_exact_period_two():
    traj = iterate("0.4", N1, EXACT, 4)
    assert traj == [Fraction(2, 5), Fraction(4, 5), Fraction(2, 5),
                    Fraction(4, 5), Fraction(2, 5)]


def test_iterate_exact_to_fixed_point():
    traj = iterate("12.5", N100, EXACT, 4)
    assert traj == [Fraction(25, 2), 25, 50, 100, 0]


def test_iterate_initial_round_off():
    traj = iterate("0.4", N1, FIVE_BIT, 0)
    assert traj == [FIVE_BIT.represent(Fraction(2, 5))]
    with pytest.raises(ValueError):
        iterate("0.4", N1, FIVE_BIT, -1)


# --- closed-form iterate -----------------------------------------------------------

def test_closed_form_values():
    assert nth_iterate_closed_form(Fraction(30), 2, N100) == 80
    assert nth_iterate_closed_form(Fraction(1, 8), 3, N1) == 1
    assert nth_iterate_closed_form(Fraction(0), 1, N100) == 0
    assert nth_iterate_closed_form(Fraction(100), 5, N100) == 0


def test_closed_form_matches_composition():
    rng = random.Random(90125)
    for params in (N1, N100):
        for _ in range(150):
            den = rng.randint(1, 10**6)
            x = params.bound * Fraction(rng.randint(0, den), den)
            traj = iterate(x, params, EXACT, 10)
            for n in range(1, 11):
                assert nth_iterate_closed_form(x, n, params) == traj[n]


def test_closed_form_rejects():
    with pytest.raises(ValueError):
        nth_iterate_closed_form(Fraction(1, 2), 0, N1)
    with pytest.raises(ValueError):
        nth_iterate_closed_form(Fraction(2), 1, N1)
    with pytest.raises(ValueError):
        nth_iterate_closed_form(
            Fraction(1, 2), 1, TentParams(bound=Fraction(1), slope=Fraction(3)))


# --- cycle detection -----------------------------------------------------------

TEN_CYCLE = {8, 16, 24, 32, 48, 56, 64, 72, 88, 96}


def test_detect_cycle_binary32_emulation():
    report = detect_cycle("67.2", N100, F32, 10**6)
    assert isinstance(report, OrbitReport)
    assert {int(v) for v in report.cycle} == TEN_CYCLE
    assert report.period == 10
    assert report.even_cycle
    # environment-dependent transient: 24-bit significand stores 67.2 with
    # its lowest set bit at 2**-16, so the integer (19) arrives at step 16
    assert report.first_integer_step == 16
    assert report.x0_represented == Fraction(4404019, 65536)


def test_detect_cycle_fixed_point_17_bit_matches_binary32():
    # truncating 67.2 at 17 fractional bits happens to store the same value
    # as round-to-nearest binary32, so the whole orbit coincides
    report = detect_cycle("67.2", N100, FixedBackend(PrecisionSpec(8, 17)), 10**6)
    assert report.x0_represented == Fraction(4404019, 65536)
    assert report.first_integer_step == 16
    assert {int(v) for v in report.cycle} == TEN_CYCLE


@pytest.mark.parametrize("backend", [F64, F32, FixedBackend(PrecisionSpec(8, 8)),
                                     FixedBackend(PrecisionSpec(8, 20))])
def test_detect_cycle_dyadic_start_is_representation_independent(backend):
    report = detect_cycle("4.23828125", N100, backend, 10**6)
    assert report.first_integer_step == 8
    assert {int(v) for v in report.cycle} == {40, 80}
    assert report.transient == 11 and report.period == 2
    traj = iterate("4.23828125", N100, backend, 8)
    assert backend.to_fraction(traj[8]) == 85


@pytest.mark.parametrize("backend", [F64, F32, FixedBackend(PrecisionSpec(8, 8)),
                                     EXACT])
def test_detect_cycle_12_5_reaches_zero(backend):
    report = detect_cycle("12.5", N100, backend, 100)
    assert report.transient == 4 and report.period == 1
    assert report.cycle == (Fraction(0),)


@pytest.mark.parametrize("backend", [F64, F32, FixedBackend(PrecisionSpec(2, 8))])
def test_detect_cycle_unit_domain_collapses_to_zero(backend):
    report = detect_cycle("0.4", N1, backend, 10**6)
    assert report.cycle == (Fraction(0),) and report.period == 1


def test_detect_cycle_orders_cycle_from_entry():
    report = detect_cycle("4.23828125", N100, F64, 1000)
    assert report.cycle == (Fraction(80), Fraction(40))  # 80 is visited first


def test_detect_cycle_budget_exhausted_is_a_finding():
    report = detect_cycle("0.4", N1, F64, 5)
    assert isinstance(report, CycleNotFound)
    assert report.max_steps == 5
    d = report.to_json_dict()
    assert d["outcome"] == "no-revisit-within-budget"


def test_orbit_report_json_shape():
    d = detect_cycle("12.5", N100, F64, 100).to_json_dict()
    assert set(d) == {"x0_given", "x0_represented", "backend", "transient",
                      "period", "cycle", "first_integer_step", "even_cycle"}
    assert d["backend"] == "f64" and d["x0_given"] == "12.5"


# --- range preservation and parity (grid laws) ------------------------------------

@pytest.mark.parametrize("backend", [EXACT, F64, F32,
                                     FixedBackend(PrecisionSpec(8, 10))])
def test_range_preserved(backend):
    rng = random.Random(5150)
    step = backend.tent_stepper(N100)
    for _ in range(200):
        x = backend.represent(Fraction(rng.randint(0, 10**6), 10**4))
        y = step(x)
        assert 0 <= backend.to_fraction(y) <= 100


def test_fixed_step_matches_exact_on_representable_points():
    spec = PrecisionSpec(8, 12)
    backend = FixedBackend(spec)
    rng = random.Random(2112)
    exact_step = EXACT.tent_stepper(N100)
    fixed_step = backend.tent_stepper(N100)
    for _ in range(500):
        mag = rng.randint(0, 100 << 12)
        x = Fraction(mag, 1 << 12)
        assert backend.to_fraction(fixed_step(backend.represent(x))) \
            == exact_step(x)


def test_integers_map_to_even_integers():
    for n in (1, 7, 16, 100):
        params = TentParams(bound=Fraction(n))
        step = EXACT.tent_stepper(params)
        for v in range(n + 1):
            out = step(Fraction(v))
            assert out.denominator == 1 and out.numerator % 2 == 0


# --- error accumulation ------------------------------------------------------------

def test_error_series_five_bit():
    series = error_accumulation(Fraction(2, 5), N1, FIVE_BIT, 10)
    expect = [Fraction(1, 40), Fraction(1, 20), Fraction(1, 10), Fraction(1, 5),
              Fraction(2, 5), Fraction(4, 5), Fraction(2, 5), Fraction(4, 5),
              Fraction(2, 5), Fraction(4, 5), Fraction(2, 5)]
    assert list(series.deviations) == expect
    assert series.final == Fraction(35, 8)


def test_error_series_zero_on_cycle_points():
    series = error_accumulation(Fraction(40), N100,
                                FixedBackend(PrecisionSpec(8, 4)), 50)
    assert series.final == 0


def test_error_series_monotone():
    series = error_accumulation("67.2", N100, F32, 200)
    assert all(b >= a for a, b in zip(series.totals, series.totals[1:]))
    exact = error_accumulation("67.2", N100, EXACT, 50)
    assert exact.final == 0


# --- binary32 representation --------------------------------------------------------

def test_binary32_rounding_matches_numpy_parse():
    rng = random.Random(777)
    cases = ["67.2", "0.4", "4.23828125", "100.0001", "0.1"]
    cases += [f"{rng.randint(0, 99)}.{rng.randint(0, 10**6):06d}" for _ in range(200)]
    for text in cases:
        ours = float(_to_binary32(Fraction(text)))
        theirs = float(np.float32(text))
        assert ours == theirs, text
    assert float(_to_binary32(Fraction(0))) == 0.0


def test_backend_labels_round_trip():
    for label in ("rational", "f64", "f32", "fixed:8,20"):
        assert backend_from_label(label).label == label
    for bad in ("f16", "fixed:8", "fixed:a,b", ""):
        with pytest.raises(ValueError):
            backend_from_label(bad)


# --- sine map -------------------------------------------------------------------

def test_sine_map_values():
    assert sine_map_step(0.0) == 0.0
    assert sine_map_step(0.5) == 1.0
    assert abs(sine_map_step(1.0)) < 1e-15
    with pytest.raises(ValueError):
        sine_map_step(1.5)


def test_sine_cycle_search_budget_finding():
    result = sine_cycle_search(0.4, 1000)
    assert isinstance(result, CycleNotFound)
    assert result.backend == "f64"


def test_sine_trajectory_is_deterministic():
    y = 0.4
    for _ in range(100):
        y = sine_map_step(y)
    z = 0.4
    for _ in range(100):
        z = math.sin(math.pi * z)
    assert y == z
