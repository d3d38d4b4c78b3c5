"""Equal-width binning and uniformity metrics."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tentlab.histogram import build_histogram, uniformity_metrics


def test_spike_histogram_hits_exactly_the_cycle_bins():
    cycle = [8, 16, 24, 32, 48, 56, 64, 72, 88, 96]
    values = cycle * 50
    h = build_histogram(values, 100, 20)
    hit = {v * 20 // 100 for v in cycle}
    for b, count in enumerate(h.counts):
        assert count == (50 if b in hit else 0)
    assert h.total == 500


def test_uniform_counts_have_zero_metrics():
    bins = 20
    values = [Fraction(2 * i + 1, 2 * bins) * 100 for i in range(bins)] * 3
    h = build_histogram(values, 100, bins)
    m = uniformity_metrics(h)
    assert m["sup_norm"] == 0 and m["chi_square"] == 0


def test_single_bin_mass():
    h = build_histogram([Fraction(1, 2)] * 10, 100, 20)
    assert h.sup_norm == pytest.approx(0.95)


def test_edges_are_right_open_except_the_last():
    h = build_histogram([0, Fraction(5), Fraction(10), Fraction(100)], 100, 20)
    assert h.counts[0] == 1  # 0
    assert h.counts[1] == 1  # 5 starts bin 1
    assert h.counts[2] == 1  # 10 starts bin 2
    assert h.counts[19] == 1  # the bound itself lands in the last bin


def test_histogram_rejects():
    with pytest.raises(ValueError):
        build_histogram([], 100, 20)
    with pytest.raises(ValueError):
        build_histogram([Fraction(101)], 100, 20)
    with pytest.raises(ValueError):
        build_histogram([Fraction(1)], 100, 1)


def test_float_values_binned_exactly():
    h = build_histogram([0.0, 99.9999999, 100.0], 100, 20)
    assert h.counts[19] == 2  # 99.9999999 and 100.0 share the last bin
    assert h.counts[0] == 1


def test_csv_rows():
    h = build_histogram([Fraction(1)], 100, 4)
    rows = list(h.csv_rows())
    assert rows == [(0.0, 25.0, 1), (25.0, 50.0, 0), (50.0, 75.0, 0),
                    (75.0, 100.0, 0)]


@given(st.lists(st.floats(min_value=0, max_value=100, allow_nan=False),
                min_size=1, max_size=300),
       st.integers(2, 40))
def test_counts_conserve_samples(values, bins):
    h = build_histogram(values, 100, bins)
    assert sum(h.counts) == h.total == len(values)
