"""Seedable deterministic bit source for the backward-walk experiments.

SplitMix64 (Steele, Lea & Flood's mix of a Weyl sequence), chosen because it
is tiny, well documented, and trivially reproducible on any platform: the
whole generator is three xor-shift-multiply rounds on a 64-bit counter.
Walks consume exactly one output word per step and use its top bit, so a
recorded (algorithm, seed) pair pins every run bit-for-bit.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """64-bit PRNG: state += gamma; output = mix(state)."""

    algorithm = "splitmix64"

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = seed
        self._state = seed & _MASK

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_bit(self) -> int:
        """One uniform bit (the top bit of the next output word)."""
        return self.next_uint64() >> 63
