"""Deterministic 64-bit PRNG (splitmix64) used for all seeded sampling.

The generator is fixed here rather than taken from numpy so that reports
are byte-identical across platforms and library versions.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1

DEFAULT_SEED = 0x7E7A


class SplitMix64:
    """splitmix64 stream; each call advances the state by the golden gamma."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        # 53 high bits, uniform in [0, 1)
        return (self.next_u64() >> 11) * 2.0 ** -53

    def next_int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] (inclusive); modulo bias is irrelevant
        at the ranges used here (spans of a few units)."""
        span = hi - lo + 1
        return lo + self.next_u64() % span

    def choice(self, seq):
        return seq[self.next_int(0, len(seq) - 1)]
