"""SplitMix64: a tiny, fully specified generator for reproducible perturbations.

The state advances by the golden-ratio increment ``0x9E3779B97F4A7C15`` and
each output is the standard mix

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

modulo 2^64.  Uniform doubles take the top 53 bits.  Everything is plain
integer arithmetic, so streams agree bit for bit across platforms.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SplitMix64"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self, size: int | None = None):
        """Uniform doubles in ``[0, 1)``."""
        if size is None:
            return (self.next_u64() >> 11) * 2.0**-53
        return np.array([(self.next_u64() >> 11) * 2.0**-53 for _ in range(size)])

    def uniform(self, lo: float, hi: float, size: int | None = None):
        return lo + (hi - lo) * self.random(size)
