"""Pinned portable PRNG (SplitMix64).

All shuffling and seed derivation in this package goes through SplitMix64 so
that boards and scan reports are byte-identical across platforms and Python
versions.  Reference: Steele, Lea, Flood, "Fast splittable pseudorandom number
generators" (the java.util.SplittableRandom mixer).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator with a tiny, fully pinned state."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return _mix64(self._state)

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # largest multiple of bound that fits in 64 bits
        limit = MASK64 - (MASK64 + 1) % bound
        while True:
            v = self.next_u64()
            if v <= limit:
                return v % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, high index down to 1."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def derive_seed(master: int, index: int) -> int:
    """Per-task seed mixing: injective for a fixed master over 64-bit indexes."""
    return _mix64((_mix64(master & MASK64) ^ (index * _GAMMA)) & MASK64)
