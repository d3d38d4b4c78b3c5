"""Equal-width histograms over [0, N] with uniformity metrics.

The reference density for the slope-2 tent map is uniform on the domain, so
a histogram is summarized by its sup-norm distance from uniform and by the
chi-square statistic against equal expected counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Histogram", "build_histogram", "uniformity_metrics"]


@dataclass(frozen=True)
class Histogram:
    """Counts over equal-width bins of [0, bound], right-open except the last."""

    bound: Fraction
    bins: int
    counts: tuple[int, ...]
    total: int

    @property
    def sup_norm(self) -> float:
        """max_b |count_b/total - 1/B|, distance from the uniform density."""
        return max(abs(c / self.total - 1 / self.bins) for c in self.counts)

    @property
    def chi_square(self) -> float:
        expected = self.total / self.bins
        return sum((c - expected) ** 2 for c in self.counts) / expected

    def csv_rows(self):
        """(bin_lo, bin_hi, count) rows with exact bin edges."""
        for b, count in enumerate(self.counts):
            lo = self.bound * b / self.bins
            hi = self.bound * (b + 1) / self.bins
            yield float(lo), float(hi), count


def build_histogram(values, bound, bins: int) -> Histogram:
    """Bin values from [0, bound] into `bins` equal-width cells.

    Values may be Fractions, floats, or ints; binning is exact (floats are
    converted to their exact rational value first), with the top edge closed
    so bound itself lands in the last bin.
    """
    if bins < 2:
        raise ValueError("need at least 2 bins")
    bound = Fraction(bound) if not isinstance(bound, str) else Fraction(bound)
    counts = [0] * bins
    total = 0
    for v in values:
        v = v if isinstance(v, Fraction) else Fraction(
            v if isinstance(v, (int, float)) else float(v))
        if not 0 <= v <= bound:
            raise ValueError(f"value {v} outside [0, {bound}]")
        idx = (v * bins) // bound  # Fraction floordiv -> int
        if idx == bins:
            idx -= 1
        counts[idx] += 1
        total += 1
    if total == 0:
        raise ValueError("cannot build a histogram from no values")
    return Histogram(bound=bound, bins=bins, counts=tuple(counts), total=total)


def uniformity_metrics(h: Histogram) -> dict:
    return {"sup_norm": h.sup_norm, "chi_square": h.chi_square}
