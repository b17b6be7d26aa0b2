"""Deterministic uniform noise source.

Measurement noise must be bit-reproducible across platforms and runs, so the
generator is specified here rather than delegated to a library: xoshiro256**
(Blackman & Vigna) seeded through splitmix64.  All arithmetic is on unsigned
64-bit integers; doubles in [0, 1) are produced by taking the top 53 bits.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def _splitmix64(state: int):
    """One splitmix64 step: returns (next_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Xoshiro256StarStar:
    """xoshiro256** stream; state is four u64 words derived from the seed."""

    def __init__(self, seed: int):
        s = seed & _MASK
        words = []
        for _ in range(4):
            s, w = _splitmix64(s)
            words.append(w)
        self._s = words

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        out = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return out

    def uniform(self) -> float:
        # top 53 bits -> [0, 1); every representable output is exact
        return (self.next_u64() >> 11) * 2.0 ** -53

    def symmetric(self, halfwidth: float) -> float:
        """Uniform draw in [-halfwidth, halfwidth]."""
        return (2.0 * self.uniform() - 1.0) * halfwidth
