"""Named invariant suites shared by the CLI and the test suite.

Each suite yields ``Check`` results and stops at the first failure, whose
``detail`` carries the counterexample.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction
from typing import Callable, Iterator, NamedTuple

from . import exact
from .clt import pattern_covariances
from .growth import completions_count, enumerate_tableaux, iter_extensions, joint_distribution_dp, parent
from .perms import EXHAUSTIVE_MAX, PERM_STATS, exhaustive_distribution

__all__ = [
    "Check",
    "SUITES",
    "SUITE_LIMITS",
    "run_suite",
    "tableau_histograms",
    "permutation_histograms",
    "rising",
]


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


def _cmp(name: str, got, want) -> Check:
    if got == want:
        return Check(name, True)
    return Check(name, False, f"got {got!r}, expected {want!r}")


def tableau_histograms(n: int) -> dict[str, dict[int, int]]:
    """Histograms of U, F, R, C, S, Y over all tableaux of length ``n``."""
    hist = {k: Counter() for k in ("U", "F", "R", "C", "S", "Y")}
    for t in enumerate_tableaux(n):
        st = t.stats()
        hist["U"][st.unrestricted] += 1
        hist["F"][st.first_row_ones] += 1
        hist["R"][st.rows] += 1
        hist["C"][st.columns] += 1
        hist["S"][st.superfluous] += 1
        hist["Y"][st.total_ones] += 1
    return {k: dict(sorted(v.items())) for k, v in hist.items()}


def permutation_histograms(n: int) -> dict[str, dict[int, int]]:
    hist = {k: Counter() for k in PERM_STATS}
    for sigma in itertools.permutations(range(1, n + 1)):
        for name, fn in PERM_STATS.items():
            hist[name][fn(sigma)] += 1
    return {k: dict(sorted(v.items())) for k, v in hist.items()}


def _shift(h: dict[int, int], by: int) -> dict[int, int]:
    return {k + by: v for k, v in h.items()}


def equidistribution(nmax: int) -> Iterator[Check]:
    for n in range(1, nmax + 1):
        tab = tableau_histograms(n)
        perm = permutation_histograms(n)
        yield _cmp(f"n={n} U vs cycles", tab["U"], perm["cycles"])
        yield _cmp(f"n={n} U vs RL minima", tab["U"], perm["rl_minima"])
        yield _cmp(f"n={n} R vs descents+1", tab["R"], _shift(perm["descents"], 1))
        yield _cmp(f"n={n} C vs ascents", tab["C"], perm["ascents"])
        yield _cmp(f"n={n} S vs 31-2", tab["S"], perm["pattern31_2"])
        yield _cmp(f"n={n} S vs crossings", tab["S"], perm["crossings"])
        yield _cmp(f"n={n} F vs U-1", tab["F"], _shift(tab["U"], -1))


def pgf_cross(nmax: int) -> Iterator[Check]:
    for n in range(1, nmax + 1):
        eul = exact.pgf_rows_eulerian(n)
        yield _cmp(f"n={n} rows: triangle recurrence vs Eulerian", exact.pgf_rows_recurrence(n), eul)
        yield _cmp(f"n={n} rows: Stirling form vs Eulerian", exact.pgf_rows_stirling(n), eul)
        if n <= 12:
            yield _cmp(f"n={n} S: recurrence vs closed form", exact.pgf_superfluous(n), exact.pgf_superfluous_closed(n))
        dp = joint_distribution_dp(n, ("U", "R", "F", "S")) if n <= 12 else None
        for stat in ("U", "R", "F", "S"):
            table = dp if dp is not None else joint_distribution_dp(n, (stat,))
            want = exact.distribution_from_pgf(exact.pgf(stat, n), n).counts
            yield _cmp(f"n={n} {stat}: DP vs pgf", table.marginal(stat), want)


def rising(z, count: int):
    """``z (z+1) ... (z+count-1)``; equals Gamma(z+count)/Gamma(z)."""
    out = 1
    for i in range(count):
        out *= z + i
    return out


def measure_change(nmax: int) -> Iterator[Check]:
    levels = {k: list(enumerate_tableaux(k)) for k in range(1, nmax + 1)}
    # extension counts by new U and by topmost position
    for k in range(1, nmax):
        for t in levels[k]:
            u = len(t.unrestricted_rows)
            by_u, by_g = Counter(), Counter()
            for ext, child in iter_extensions(t):
                by_u[len(child.unrestricted_rows)] += 1
                if ext.kind == "west":
                    by_g[ext.g] += 1
            want_u = {v: math.comb(u, v - 1) for v in range(1, u + 2)}
            want_g = {j: 2 ** (u - j) for j in range(1, u + 1)}
            if dict(by_u) != want_u or dict(by_g) != want_g:
                yield Check(f"extension counts at length {k}", False, f"tableau\n{t}")
                return
        yield Check(f"extension counts at length {k}", True)
    # sum over children of X(parent) equals sum over parents of 2^U X
    weights: dict[str, Callable[[int], int]] = {
        "1": lambda u: 1,
        "U": lambda u: u,
        "2^U": lambda u: 2**u,
        "3^U": lambda u: 3**u,
    }
    for n in range(2, nmax + 1):
        for name, x in weights.items():
            lhs = sum(x(len(parent(t).unrestricted_rows)) for t in levels[n])
            rhs = sum(2 ** len(t.unrestricted_rows) * x(len(t.unrestricted_rows)) for t in levels[n - 1])
            yield _cmp(f"n={n} parent reweighting X={name}", lhs, rhs)
    # completions and the conditional pgf of U_n
    for n in range(1, nmax + 1):
        for k in range(1, n + 1):
            yield _cmp(
                f"n={n} k={k} completions sum", sum(completions_count(t, n) for t in levels[k]), math.factorial(n)
            )
            below = _completion_sums(levels, k, n)
            for z in (2, 3):
                bad = [
                    t
                    for t, totals in below
                    if totals(z) != rising(z, n - k) * (z + n - k) ** len(t.unrestricted_rows)
                ]
                yield Check(f"n={n} k={k} conditional pgf at z={z}", not bad, f"tableau\n{bad[0]}" if bad else "")


def _completion_sums(levels, k: int, n: int):
    """For each tableau of length k: a function z -> sum of z^U over its completions."""
    out = []
    for t in levels[k]:
        hist = Counter()
        stack = [t]
        while stack:
            cur = stack.pop()
            if cur.length == n:
                hist[len(cur.unrestricted_rows)] += 1
            else:
                stack.extend(child for _, child in iter_extensions(cur))
        out.append((t, lambda z, h=hist: sum(c * z**u for u, c in h.items())))
    return out


def moments(nmax: int) -> Iterator[Check]:
    for n in range(2, nmax + 1):
        got = exact.moments_from_pgfs(n).as_dict()
        want = exact.moment_formulas(n).as_dict()
        for key in want:
            if got[key] != want[key]:
                yield Check(f"n={n} {key}", False, f"pgf gives {got[key]}, formula gives {want[key]}")
                return
        yield Check(f"n={n} all moments", True)


def covariances(nmax: int) -> Iterator[Check]:
    pc = pattern_covariances()
    yield _cmp("single indicator mean", pc.single, Fraction(1, 6))
    want = [Fraction(1, 12), Fraction(1, 30), Fraction(1, 120), Fraction(1, 120), Fraction(1, 40), Fraction(1, 40)]
    for (name, got), w in zip(pc.expectations.items(), want):
        yield _cmp(f"E {name}", got, w)
    yield _cmp("variance coefficient", pc.coefficient, Fraction(1, 180))
    for n in range(2, min(nmax, EXHAUSTIVE_MAX) + 1):
        brute = exhaustive_distribution(n, "pattern31_2").variance()
        yield _cmp(f"n={n} var of 31-2 vs formula", brute, exact.moment_formulas(n).var_S)


SUITES: dict[str, Callable[[int], Iterator[Check]]] = {
    "equidistribution": equidistribution,
    "pgf-cross": pgf_cross,
    "measure-change": measure_change,
    "moments": moments,
    "covariances": covariances,
}

# (default nmax, largest accepted nmax)
SUITE_LIMITS = {
    "equidistribution": (7, 9),
    "pgf-cross": (20, 50),
    "measure-change": (7, 8),
    "moments": (40, 200),
    "covariances": (8, 9),
}


def run_suite(name: str, nmax: int | None = None) -> Iterator[Check]:
    """Run a suite, stopping after the first failed check."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    default, cap = SUITE_LIMITS[name]
    nmax = default if nmax is None else nmax
    if not 1 <= nmax <= cap:
        raise ValueError(f"suite {name} supports 1 <= nmax <= {cap}, got {nmax}")
    for check in SUITES[name](nmax):
        yield check
        if not check.passed:
            return
