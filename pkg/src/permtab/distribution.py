from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

__all__ = ["DistributionTable", "histogram"]


@dataclass(frozen=True)
class DistributionTable:
    """Exact counts ``value -> number of objects`` over a population of size ``n!``."""

    n: int
    counts: dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "counts", dict(sorted((int(k), int(v)) for k, v in self.counts.items() if v)))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def population(self) -> int:
        return math.factorial(self.n)

    def moment(self, r: int) -> Fraction:
        return Fraction(sum(v * k**r for k, v in self.counts.items()), self.total)

    def mean(self) -> Fraction:
        return self.moment(1)

    def variance(self) -> Fraction:
        return self.moment(2) - self.moment(1) ** 2

    def shifted(self, by: int) -> "DistributionTable":
        return DistributionTable(self.n, {k + by: v for k, v in self.counts.items()})

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "counts": {str(k): str(v) for k, v in self.counts.items()},
            "total": str(self.total),
        }


def histogram(n: int, values: Iterable[int]) -> DistributionTable:
    return DistributionTable(n, Counter(values))
