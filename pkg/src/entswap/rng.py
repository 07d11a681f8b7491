"""Self-contained 64-bit splitmix generator.

Random draws feed reproducible reports, so the generator is spelled out here
instead of delegating to platform RNGs whose streams may change between
library versions.  The algorithm is the public splitmix64: the state walks a
fixed odd increment and each output is a bijective avalanche mix of the
state.  Identical seeds give identical streams on every platform.
"""
from __future__ import annotations

_MASK = (1 << 64) - 1
_INCREMENT = 0x9E3779B97F4A7C15
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        """Next raw 64-bit output."""
        self._state = (self._state + _INCREMENT) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX_1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX_2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_in(self, low: float, high: float) -> float:
        """Uniform double in [low, high)."""
        return low + (high - low) * self.uniform()
