"""Coalitions: subsets of concept indices encoded as bit masks.

Bit i set means concept i is visible (kept).  A Python int holds the bits, so
any concept count is representable; for n <= 64 it fits one machine word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import CoalitionSizeMismatch


@dataclass(frozen=True)
class Coalition:
    bits: int
    n: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.bits < (1 << self.n):
            raise CoalitionSizeMismatch(
                f"bits {self.bits:#x} not representable with n={self.n}"
            )

    @classmethod
    def empty(cls, n: int) -> "Coalition":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "Coalition":
        return cls((1 << n) - 1, n)

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "Coalition":
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise CoalitionSizeMismatch(f"concept index {i} out of range for n={n}")
            bits |= 1 << i
        return cls(bits, n)

    def contains(self, i: int) -> bool:
        return bool((self.bits >> i) & 1)

    def add(self, i: int) -> "Coalition":
        return Coalition(self.bits | (1 << i), self.n)

    def remove(self, i: int) -> "Coalition":
        return Coalition(self.bits & ~(1 << i), self.n)

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def indicator(self) -> np.ndarray:
        """Length-n float vector with 1.0 at member positions."""
        return np.array([(self.bits >> i) & 1 for i in range(self.n)], dtype=np.float64)
