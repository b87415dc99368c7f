"""Exponential population growth discretized into per-generation additions."""

from __future__ import annotations

import math

__all__ = ["GrowthSchedule"]


class GrowthSchedule:
    """Converts multiply-by-(1+n) growth into integer node additions.

    The ideal population after g generations is ``start * (1+n)**g`` (a real
    number); the integer population is its floor, so fractional growth is
    carried across generations instead of being discarded. One schedule
    serves one realization.
    """

    def __init__(self, initial_population: int, n: float):
        if n <= 0.0:
            raise ValueError(f"growth fraction must be positive, got n={n}")
        if initial_population < 1:
            raise ValueError(f"initial population must be >= 1, got {initial_population}")
        self.n = float(n)
        self._start = int(initial_population)
        self._generations = 0
        self._population = int(initial_population)

    @property
    def ideal_size(self) -> float:
        """Real-valued population tracker, start * (1+n)**generations."""
        return self._start * (1.0 + self.n) ** self._generations

    @property
    def population(self) -> int:
        """Integer population, floor(ideal_size)."""
        return self._population

    @property
    def log_growth_factor(self) -> float:
        """ln(1+n): continuous growth rate times the inter-update interval."""
        return math.log1p(self.n)

    def nodes_before_next_update(self) -> int:
        """Advance one generation interval; return how many nodes to add.

        May return 0 when the ideal population has not yet crossed the next
        integer; the fractional remainder is never lost.
        """
        self._generations += 1
        grown = math.floor(self._start * (1.0 + self.n) ** self._generations)
        added = grown - self._population
        self._population = grown
        return added
