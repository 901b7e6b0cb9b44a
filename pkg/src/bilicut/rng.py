"""Deterministic random stream used by the instance generator.

xoshiro256** with SplitMix64 state expansion. Implemented by hand so that
instance bytes are reproducible from a single integer seed independent of
numpy's generator versioning. All arithmetic is modulo 2**64.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class SplitMix64:
    """Seed expander; also usable as a cheap stream for derived seeds."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** stream with the reference output scrambler."""

    def __init__(self, seed: int):
        sm = SplitMix64(seed)
        self.s = [sm.next_u64() for _ in range(4)]
        if all(w == 0 for w in self.s):
            # The all-zero state is invalid for xoshiro; nudge deterministically.
            self.s[0] = 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def next_float(self) -> float:
        # 53-bit mantissa draw in [0, 1).
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform_pm1(self) -> float:
        """Uniform draw in [-1, 1)."""
        return 2.0 * self.next_float() - 1.0

    def randbelow(self, bound: int) -> int:
        """Unbiased integer in [0, bound) via rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound
