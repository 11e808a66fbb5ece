from dataclasses import dataclass
from typing import Sequence, TypeVar

import numpy as np

T = TypeVar("T")


@dataclass(frozen=True)
class RngState:
    seed: int
    position: int


class SeededRandom:
    """
    The one pseudo-random source of a run, shared by every station and consumed in dispatch order.

    Wraps a numpy PCG64 generator so that an identical seed and an identical scheduling order
    reproduce the identical draw sequence.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ValueError(f"Seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._generator = np.random.Generator(np.random.PCG64(seed))
        self._position = 0

    @property
    def state(self) -> RngState:
        return RngState(seed=self.seed, position=self._position)

    def draw_uniform_int(self, lo: int, hi: int) -> int:
        """
        Draw an integer uniformly from the closed interval [lo, hi].

        :raises ValueError: If lo > hi
        """
        if lo > hi:
            raise ValueError(f"Empty draw interval [{lo}, {hi}]")
        self._position += 1
        if lo == hi:
            return lo
        return int(self._generator.integers(lo, hi + 1))

    def choice(self, items: Sequence[T]) -> T:
        """Pick one element uniformly."""
        if not items:
            raise ValueError("Cannot choose from an empty sequence")
        return items[self.draw_uniform_int(0, len(items) - 1)]
