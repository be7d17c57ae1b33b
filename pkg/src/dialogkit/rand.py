"""Deterministic random number generation.

A fixed linear congruential generator (multiplier 1664525, increment
1013904223, modulus 2**32) so that datasets and prompt-variant choices are
byte-identical across runs, platforms, and reimplementations.
"""
from __future__ import annotations

_A = 1664525
_C = 1013904223
_M = 2**32


class Lcg:
    def __init__(self, seed: int):
        self.state = seed % _M

    def next_u32(self) -> int:
        self.state = (_A * self.state + _C) % _M
        return self.state

    def rand(self) -> float:
        """Uniform float in [0, 1)."""
        return self.next_u32() / _M

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return int(self.rand() * n)

    def choice(self, seq):
        return seq[self.randint(len(seq))]


def pick_variant(seed: int, turn: int, n: int) -> int:
    """Deterministic variant index for prompt variation, keyed by seed and turn."""
    if n <= 0:
        raise ValueError("n must be positive")
    rng = Lcg((seed * 2654435761 + turn * 2246822519) % _M)
    rng.next_u32()
    return rng.randint(n)
