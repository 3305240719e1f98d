"""Portable deterministic random stream used for built-in model weights.

The toy classifier weights and probe images must be reproducible bit for bit
in any implementation language, so they are drawn from a fully specified
xorshift64* generator rather than from numpy.

Algorithm (all arithmetic on unsigned 64-bit integers):

    state ^= state >> 12
    state ^= state << 25
    state ^= state >> 27
    output = state * 0x2545F4914F6CDD1D

A seed of zero is remapped to 0x9E3779B97F4A7C15 because the all-zero state
is a fixed point. Derived values:

* ``uniform()``   -> float in [0, 1): top 53 bits of the output / 2**53
* ``uniform_pm1()`` -> float in [-1, 1): 2 * uniform() - 1
* ``byte()``      -> int in [0, 256): top 8 bits of the output
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED_REPLACEMENT = 0x9E3779B97F4A7C15


class Xorshift64Star:
    """xorshift64* stream with the constants documented in the module docstring."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        self._state = state if state != 0 else _ZERO_SEED_REPLACEMENT

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & _MASK64

    def uniform(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def uniform_pm1(self) -> float:
        return 2.0 * self.uniform() - 1.0

    def byte(self) -> int:
        return self.next_u64() >> 56

    def fill_pm1(self, shape: tuple[int, ...]) -> np.ndarray:
        """Array of uniform [-1, 1) values, filled in C order."""
        flat = np.empty(int(np.prod(shape)), dtype=np.float64)
        for i in range(flat.size):
            flat[i] = self.uniform_pm1()
        return flat.reshape(shape)


def probe_image(seed: int, height: int = 64, width: int = 64) -> np.ndarray:
    """Deterministic RGB noise image from the portable byte stream.

    Bytes fill the array in C order: row, then column, then channel.  Used
    for load-time bundle probes so an exporter written in another language
    can predeclare the expected logits.
    """
    gen = Xorshift64Star(seed)
    flat = np.empty(height * width * 3, dtype=np.uint8)
    for i in range(flat.size):
        flat[i] = gen.byte()
    return flat.reshape(height, width, 3)
