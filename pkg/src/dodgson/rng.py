"""Seedable, portable 64-bit PRNG (SplitMix64) used by every generator.

Sequences depend only on the seed integers, never on platform or Python
version, which makes generated elections bit-reproducible anywhere.  Streams
are split per trial by the documented rule

    stream_seed(master, trial) = mix64((master + GOLDEN * (trial + 1)) mod 2^64)

so trials are independent and may be generated in parallel by trial index.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche mix on 64-bit words."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, trial: int) -> int:
    """Per-trial stream seed; see module docstring for the exact rule."""
    return mix64((master + GOLDEN * (trial + 1)) & MASK64)


class SplitMix64:
    """Minimal generator: 64-bit words, unbiased integers, fair shuffles."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def randbits(self, k: int) -> int:
        out = 0
        filled = 0
        while filled < k:
            out = (out << 64) | self.next_u64()
            filled += 64
        return out >> (filled - k)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection; no modulo bias."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        k = n.bit_length()
        while True:
            r = self.randbits(k)
            if r < n:
                return r

    def shuffle(self, xs: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.randbelow(i + 1)
            xs[i], xs[j] = xs[j], xs[i]

    def permutation(self, m: int) -> tuple[int, ...]:
        xs = list(range(m))
        self.shuffle(xs)
        return tuple(xs)
