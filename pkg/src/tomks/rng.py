"""Deterministic 64-bit PRNG for reproducible instance generation.

splitmix64 (Steele, Lea, Flood 2014): state advances by the golden-gamma
constant and the output is finalized by two xor-shift multiplies. The
instance generator derives its stream from (seed, n, m) by absorbing n
and m into the seed state, so an instance is pinned by those three
numbers alone, independent of platform or Python version. Bounded draws
use rejection sampling, so they are exactly uniform.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def absorb(self, value: int) -> "SplitMix64":
        self.state = _mix(self.state ^ _mix(value & _MASK))
        return self

    def next64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        return _mix(self.state)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], rejection-sampled."""
        if hi < lo:
            raise ValueError("empty range")
        width = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % width)
        while True:
            r = self.next64()
            if r < limit:
                return lo + r % width
