"""Permutation statistics and exhaustive oracles.

Permutations are sequences in one-line notation over ``1..n``; position
``i`` is 1-based in docstrings, 0-based in code.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numba
import numpy as np

from .distribution import DistributionTable, histogram
from .rng import make_rng

__all__ = [
    "EXHAUSTIVE_MAX",
    "FenwickTree",
    "check_permutation",
    "parse_permutation",
    "format_permutation",
    "cycles",
    "rl_minima",
    "descents",
    "ascents",
    "count_31_2",
    "count_31_2_naive",
    "crossings",
    "PERM_STATS",
    "exhaustive_distribution",
    "random_permutation",
    "random_permutations",
    "batch_descents",
    "batch_rl_minima",
    "batch_count_31_2",
]

EXHAUSTIVE_MAX = 9


class FenwickTree:
    """Cumulative frequencies over indices ``1..size``."""

    def __init__(self, size: int):
        self.size = size
        self.tree = [0] * (size + 1)

    def add(self, index: int, value: int = 1) -> None:
        while index <= self.size:
            self.tree[index] += value
            index += index & -index

    def prefix(self, index: int) -> int:
        """Sum of frequencies at ``1..index``."""
        total = 0
        while index > 0:
            total += self.tree[index]
            index -= index & -index
        return total


def check_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{len(sigma)}")
    return sigma


def parse_permutation(text: str) -> tuple[int, ...]:
    text = text.strip()
    return check_permutation(int(x) for x in text.split(",")) if text else ()


def format_permutation(sigma: Sequence[int]) -> str:
    return ",".join(str(int(x)) for x in sigma)


def cycles(sigma: Sequence[int]) -> int:
    seen = [False] * len(sigma)
    count = 0
    for start in range(len(sigma)):
        if seen[start]:
            continue
        count += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = sigma[i] - 1
    return count


def rl_minima(sigma: Sequence[int]) -> int:
    """Entries smaller than everything to their right."""
    count = 0
    low = len(sigma) + 1
    for x in reversed(sigma):
        if x < low:
            count += 1
            low = x
    return count


def descents(sigma: Sequence[int]) -> int:
    return sum(1 for a, b in zip(sigma, sigma[1:]) if a > b)


def ascents(sigma: Sequence[int]) -> int:
    return sum(1 for a, b in zip(sigma, sigma[1:]) if a < b)


def count_31_2(sigma: Sequence[int]) -> int:
    """Occurrences of the pattern 31-2: pairs ``1 < i < j`` with
    ``sigma[i-1] > sigma[j] > sigma[i]``.

    Scans positions right to left keeping a Fenwick tree of the values seen
    so far; each descent bottom ``i`` then counts later values strictly
    between ``sigma[i]`` and ``sigma[i-1]``.  O(n log n).
    """
    n = len(sigma)
    tree = FenwickTree(n)
    total = 0
    for i in range(n - 1, 0, -1):
        hi, lo = sigma[i - 1], sigma[i]
        if hi > lo:
            total += tree.prefix(hi - 1) - tree.prefix(lo)
        tree.add(lo)
    return total


def count_31_2_naive(sigma: Sequence[int]) -> int:
    n = len(sigma)
    return sum(
        1
        for i in range(1, n)
        for j in range(i + 1, n)
        if sigma[i - 1] > sigma[j] > sigma[i]
    )


def crossings(sigma: Sequence[int]) -> int:
    """Ordered pairs ``(i, j)`` with ``i < j <= s_i < s_j`` or ``i > j > s_i > s_j``."""
    n = len(sigma)
    total = 0
    for i in range(1, n + 1):
        si = sigma[i - 1]
        for j in range(1, n + 1):
            sj = sigma[j - 1]
            if i < j <= si < sj or i > j > si > sj:
                total += 1
    return total


PERM_STATS: dict[str, Callable[[Sequence[int]], int]] = {
    "cycles": cycles,
    "rl_minima": rl_minima,
    "descents": descents,
    "ascents": ascents,
    "pattern31_2": count_31_2,
    "crossings": crossings,
}


def exhaustive_distribution(n: int, stat: str | Callable[[Sequence[int]], int]) -> DistributionTable:
    """Histogram of ``stat`` over all ``n!`` permutations of ``1..n``."""
    if not 1 <= n <= EXHAUSTIVE_MAX:
        raise ValueError(f"exhaustive distribution supports 1 <= n <= {EXHAUSTIVE_MAX}, got {n}")
    fn = PERM_STATS[stat] if isinstance(stat, str) else stat
    return histogram(n, (fn(p) for p in itertools.permutations(range(1, n + 1))))


def random_permutation(n: int, seed: int | None = None, rng: np.random.Generator | None = None) -> tuple[int, ...]:
    """Uniform permutation of ``1..n`` by a Fisher-Yates shuffle."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed) if rng is None else rng
    out = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        out[i], out[j] = out[j], out[i]
    return tuple(out)


def random_permutations(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent uniform permutations, one per row, values ``1..n``."""
    base = np.broadcast_to(np.arange(1, n + 1, dtype=np.int64), (size, n))
    return rng.permuted(base, axis=1)


def batch_descents(perms: np.ndarray) -> np.ndarray:
    return (perms[:, :-1] > perms[:, 1:]).sum(axis=1)


def batch_rl_minima(perms: np.ndarray) -> np.ndarray:
    suffix_min = np.minimum.accumulate(perms[:, ::-1], axis=1)[:, ::-1]
    return (perms[:, :-1] < suffix_min[:, 1:]).sum(axis=1) + 1


@numba.njit(cache=True)
def _batch_31_2(perms):
    size, n = perms.shape
    out = np.zeros(size, dtype=np.int64)
    tree = np.zeros(n + 1, dtype=np.int64)
    for row in range(size):
        tree[:] = 0
        total = 0
        for i in range(n - 1, 0, -1):
            hi = perms[row, i - 1]
            lo = perms[row, i]
            if hi > lo:
                k = hi - 1
                while k > 0:
                    total += tree[k]
                    k -= k & -k
                k = lo
                while k > 0:
                    total -= tree[k]
                    k -= k & -k
            k = lo
            while k <= n:
                tree[k] += 1
                k += k & -k
        out[row] = total
    return out


def batch_count_31_2(perms: np.ndarray) -> np.ndarray:
    """:func:`count_31_2` for every row of an integer array."""
    return _batch_31_2(np.ascontiguousarray(perms, dtype=np.int64))
