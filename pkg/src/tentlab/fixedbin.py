"""Exact decimal parsing and truncating fixed-point binary arithmetic.

A :class:`FixedBinary` is a non-negative value on the grid of multiples of
``2**-q`` that fits in ``p`` integer bits, stored as the integer ``magnitude``
(the whole bit string read as an integer, so ``value = magnitude / 2**q``).
There is no normalization and no hidden bit: 0.0110 with p=1, q=4 is a valid
number whose leading digit is zero.

Rounding is truncation toward zero, applied once by :func:`round_off` when a
rational enters the grid.  Doubling and in-grid subtraction are exact, which
is what makes the slope-2 tent map representable without any per-step
round-off beyond the initial conversion.

Exact rationals are plain :class:`fractions.Fraction` values; decimal numeral
strings are parsed to rationals without ever touching host floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

__all__ = [
    "FixedBinary",
    "PrecisionSpec",
    "IntegerClass",
    "parse_decimal",
    "round_off",
    "double_value",
    "subtract_from",
    "classify_integer",
    "to_decimal_string",
    "to_rational",
    "exact_decimal_string",
]

_DECIMAL_RE = re.compile(r"(?:\d+(?:\.\d+)?|\.\d+)\Z")


def parse_decimal(text: str) -> Fraction:
    """Parse a non-negative decimal numeral to its exact rational value.

    No rounding happens here: "0.4" becomes 2/5, "67.2" becomes 336/5.
    Signs, exponents, and anything else that is not a plain decimal numeral
    are rejected.
    """
    s = text.strip()
    if s.startswith(("-", "+")):
        raise ValueError(f"numeral must be non-negative and unsigned: {text!r}")
    if not _DECIMAL_RE.fullmatch(s):
        raise ValueError(f"malformed decimal numeral: {text!r}")
    return Fraction(s)


@dataclass(frozen=True)
class PrecisionSpec:
    """Fixed-point format: p integer bits, q fractional bits (m = p + q)."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"need at least one integer bit, got p={self.p}")
        if self.q < 0:
            raise ValueError(f"fractional bit count must be >= 0, got q={self.q}")

    @property
    def m(self) -> int:
        """Total precision in bits."""
        return self.p + self.q

    @classmethod
    def for_domain(cls, bound: Fraction | int, q: int) -> "PrecisionSpec":
        """Spec with the default capacity for values in [0, bound].

        p is chosen as ceil(log2(bound + 1)) + 1 so every value in the domain
        is representable with one bit to spare.
        """
        bound = Fraction(bound)
        if bound <= 0:
            raise ValueError("domain bound must be positive")
        ceil_np1 = -((-(bound + 1).numerator) // (bound + 1).denominator)
        p = max(1, (ceil_np1 - 1).bit_length()) + 1
        return cls(p=p, q=q)


@dataclass(frozen=True)
class FixedBinary:
    """A non-negative fixed-point binary number: value = magnitude / 2**q."""

    magnitude: int
    spec: PrecisionSpec

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError("magnitude must be non-negative")
        if self.magnitude >= 1 << self.spec.m:
            raise OverflowError(
                f"magnitude {self.magnitude} does not fit in "
                f"p={self.spec.p} integer + q={self.spec.q} fractional bits"
            )

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def value(self) -> Fraction:
        return Fraction(self.magnitude, 1 << self.spec.q)

    @property
    def bits(self) -> str:
        """Bit-string rendering "IIII.FFFF" with the point after position 0."""
        p, q = self.spec.p, self.spec.q
        whole = self.magnitude >> q
        if q == 0:
            return format(whole, f"0{p}b")
        frac = self.magnitude & ((1 << q) - 1)
        return format(whole, f"0{p}b") + "." + format(frac, f"0{q}b")

    @classmethod
    def from_bits(cls, text: str) -> "FixedBinary":
        """Build from an "IIII.FFFF" string; p and q are read off the digits."""
        whole, _, frac = text.partition(".")
        if not whole or not set(whole + frac) <= {"0", "1"}:
            raise ValueError(f"malformed bit string: {text!r}")
        return cls(int(whole + frac or "0", 2), PrecisionSpec(len(whole), len(frac)))

    def __str__(self) -> str:
        return self.bits


class IntegerClass(Enum):
    NOT_INTEGER = "not-integer"
    ODD_INTEGER = "odd-integer"
    EVEN_INTEGER = "even-integer"


def round_off(x: Fraction | int, spec: PrecisionSpec) -> FixedBinary:
    """Truncate a non-negative rational onto the 2**-q grid.

    Keeps the largest representable value <= x (truncation toward zero), the
    behaviour of chopping an infinite binary expansion after q fractional
    digits.  Idempotent on values already on the grid.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"cannot represent negative value {x}")
    if x >= 1 << spec.p:
        raise OverflowError(f"{x} needs more than p={spec.p} integer bits")
    mag = (x.numerator << spec.q) // x.denominator
    return FixedBinary(mag, spec)


def double_value(x: FixedBinary) -> FixedBinary:
    """Multiply by two exactly by shifting the point one digit right.

    Never introduces round-off; the vacated trailing fractional bit becomes
    zero, so each doubling erodes one fractional digit of the operand.
    """
    mag = x.magnitude << 1
    if mag >= 1 << x.spec.m:
        raise OverflowError(f"2 * {x.value} does not fit in p={x.spec.p} integer bits")
    return FixedBinary(mag, x.spec)


def subtract_from(n: Fraction | int, x: FixedBinary) -> FixedBinary:
    """Exact difference n - x for an n representable in x's format.

    Both operands sit on the same 2**-q grid, so the subtraction is exact.
    """
    n = Fraction(n)
    spec = x.spec
    n_scaled = n * (1 << spec.q)
    if n < 0 or n_scaled.denominator != 1 or n >= 1 << spec.p:
        raise ValueError(f"{n} is not representable with p={spec.p}, q={spec.q}")
    mag = n_scaled.numerator - x.magnitude
    if mag < 0:
        raise ValueError(f"negative result: {n} < {x.value}")
    return FixedBinary(mag, spec)


def classify_integer(x: FixedBinary) -> IntegerClass:
    """Integer iff all fractional bits are zero; parity is bit q."""
    if x.magnitude & ((1 << x.spec.q) - 1):
        return IntegerClass.NOT_INTEGER
    if (x.magnitude >> x.spec.q) & 1:
        return IntegerClass.ODD_INTEGER
    return IntegerClass.EVEN_INTEGER


def to_rational(x: FixedBinary) -> Fraction:
    """Exact rational value magnitude / 2**q, reduced."""
    return Fraction(x.magnitude, 1 << x.spec.q)


def to_decimal_string(x: FixedBinary) -> str:
    """Exact decimal expansion; always finite because the value is dyadic."""
    q = x.spec.q
    whole = x.magnitude >> q
    frac = x.magnitude & ((1 << q) - 1)
    if frac == 0:
        return str(whole)
    # frac / 2**q == frac * 5**q / 10**q
    digits = str(frac * 5**q).rjust(q, "0").rstrip("0")
    return f"{whole}.{digits}"


def exact_decimal_string(x: Fraction) -> str:
    """Exact decimal for 2,5-smooth denominators, "num/den" otherwise."""
    den = x.denominator
    two = five = 0
    while den % 2 == 0:
        den //= 2
        two += 1
    while den % 5 == 0:
        den //= 5
        five += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    k = max(two, five)
    scaled = x.numerator * 10**k // x.denominator
    whole, frac = divmod(scaled, 10**k)
    if frac == 0:
        return str(whole)
    return f"{whole}.{str(frac).rjust(k, '0').rstrip('0')}"
