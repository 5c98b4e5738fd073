"""Exact probability generating functions of tableau statistics.

All pgfs are :class:`~permtab.poly.ExactPoly` values in ``z`` with rational
coefficients (``ExactBiPoly`` in ``z, w`` for the first-row/unrestricted
joint law).  Nothing here uses floating point.

Statistic names: U unrestricted rows, F 1s in the top row, R rows,
C columns, S superfluous 1s.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .distribution import DistributionTable
from .poly import ExactBiPoly, ExactLaurent, ExactPoly, NegativePowerError

__all__ = [
    "PGF_MAX_N",
    "CLOSED_FORM_MAX_N",
    "ConsistencyError",
    "harmonic",
    "pgf_unrestricted",
    "unrestricted_factors",
    "pgf_joint_first_unrestricted",
    "pgf_first_row",
    "eulerian_row",
    "stirling2",
    "rows_triangle",
    "pgf_rows_eulerian",
    "pgf_rows_recurrence",
    "pgf_rows_stirling",
    "pgf_rows",
    "pgf_columns",
    "pgf_superfluous",
    "pgf_superfluous_closed",
    "superfluous_coefficients",
    "factorial_moment",
    "distribution_from_pgf",
    "MomentTable",
    "moment_formulas",
    "moments_from_pgfs",
    "pgf",
]

PGF_MAX_N = 200
CLOSED_FORM_MAX_N = 20

Z = ExactPoly((0, 1))


class ConsistencyError(AssertionError):
    """Two independent constructions of the same object disagree."""


def _check_n(n: int, cap: int = PGF_MAX_N) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if n > cap:
        raise ValueError(f"n={n} exceeds the supported bound {cap}")


def harmonic(n: int, order: int = 1) -> Fraction:
    return sum((Fraction(1, k**order) for k in range(1, n + 1)), Fraction(0))


# unrestricted rows ------------------------------------------------------

def pgf_unrestricted(n: int) -> ExactPoly:
    """``prod_{j<n} (z + j) / (j + 1)``: the law of a sum of independent
    Bernoulli(1/k) indicators, k = 1..n."""
    _check_n(n)
    p = ExactPoly((1,))
    for j in range(n):
        p = p * ExactPoly((j, 1))
    return p / math.factorial(n)


def unrestricted_factors(n: int) -> list[ExactPoly]:
    """The factors ``1 - 1/k + z/k`` whose product is :func:`pgf_unrestricted`."""
    return [ExactPoly((1 - Fraction(1, k), Fraction(1, k))) for k in range(1, n + 1)]


def pgf_joint_first_unrestricted(n: int) -> ExactBiPoly:
    """Joint pgf ``E z^F w^U = w * prod_{k=2..n} (z + w + k - 2) / k``."""
    _check_n(n)
    p = ExactBiPoly.w()
    for k in range(2, n + 1):
        p = p * (ExactBiPoly.z() + ExactBiPoly.w() + (k - 2)) / k
    return p


def pgf_first_row(n: int) -> ExactPoly:
    return pgf_joint_first_unrestricted(n).at_w(1)


# rows -------------------------------------------------------------------

@lru_cache(maxsize=None)
def eulerian_row(n: int) -> tuple[int, ...]:
    """Eulerian numbers <n, k> for k = 0..n-1 (permutations with k descents)."""
    if n == 0:
        return (1,)
    prev = eulerian_row(n - 1) if n > 1 else (1,)
    row = []
    for k in range(n):
        left = (k + 1) * prev[k] if k < len(prev) else 0
        right = (n - k) * prev[k - 1] if 1 <= k <= len(prev) else 0
        row.append(left + right)
    return tuple(row)


@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1)
    return tuple(
        (k * prev[k] if k < len(prev) else 0) + (prev[k - 1] if k >= 1 else 0)
        for k in range(n + 1)
    )


def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind {n, k}."""
    if n < 0 or k < 0 or k > n:
        return 0
    return _stirling2_row(n)[k]


@lru_cache(maxsize=None)
def rows_triangle(k: int) -> tuple[int, ...]:
    """Row ``k`` of the triangle ``a[k][m] = m a[k-1][m-1] + (m+1) a[k-1][m]``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return (1,)
    prev = rows_triangle(k - 1)
    return tuple(
        (m * prev[m - 1] if m >= 1 else 0) + ((m + 1) * prev[m] if m < len(prev) else 0)
        for m in range(k + 1)
    )


def pgf_rows_eulerian(n: int) -> ExactPoly:
    _check_n(n)
    return ExactPoly((0,) + eulerian_row(n)) / math.factorial(n)


def pgf_rows_recurrence(n: int) -> ExactPoly:
    """``(z/n!) sum_m (m+1) a[n-1][m] (z-1)^(n-1-m)``."""
    _check_n(n)
    a = rows_triangle(n - 1)
    zm1 = ExactPoly((-1, 1))
    acc = ExactPoly()
    power = ExactPoly((1,))
    for m in range(n - 1, -1, -1):
        acc = acc + power * ((m + 1) * a[m])
        power = power * zm1
    return (acc * Z) / math.factorial(n)


def pgf_rows_stirling(n: int) -> ExactPoly:
    """``(z/n!) sum_m m! {n, m} (z-1)^(n-m)``."""
    _check_n(n)
    zm1 = ExactPoly((-1, 1))
    acc = ExactPoly()
    for m in range(n + 1):
        acc = acc + zm1 ** (n - m) * (math.factorial(m) * stirling2(n, m))
    return (acc * Z) / math.factorial(n)


def pgf_rows(n: int) -> ExactPoly:
    """pgf of R, built from the Eulerian triangle and from the ``a`` triangle;
    the two must agree exactly."""
    euler = pgf_rows_eulerian(n)
    rec = pgf_rows_recurrence(n)
    if euler != rec:
        raise ConsistencyError(f"row pgf constructions disagree at n={n}")
    return euler


def pgf_columns(n: int) -> ExactPoly:
    """pgf of C = n - R (reflection of :func:`pgf_rows`)."""
    r = pgf_rows(n)
    return ExactPoly.from_terms({n - e: c for e, c in r.terms().items()})


# superfluous 1s -----------------------------------------------------------

# A row is a list of (low exponent, dense object array) pairs.  Numpy object
# arrays keep the big-int arithmetic but move the loops into C.
_Row = list[tuple[int, np.ndarray]]
_C_CACHE_ROWS = 64
_C_ROWS: list[_Row] = [[(0, np.array([1], dtype=object))]]
_C_LAST: dict[int, _Row] = {}
_C_LOCK = threading.Lock()


def _geometric(a: np.ndarray, ell: int) -> np.ndarray:
    """Multiply by ``1 + z + ... + z^ell``: a sliding window sum."""
    cs = np.concatenate((a, np.zeros(ell, dtype=object))).cumsum()
    cs[ell + 1:] -= cs[: a.size - 1].copy()
    return cs


def _add(x: tuple[int, np.ndarray], y: tuple[int, np.ndarray]) -> tuple[int, np.ndarray]:
    (lx, ax), (ly, ay) = x, y
    lo = min(lx, ly)
    out = np.zeros(max(lx + ax.size, ly + ay.size) - lo, dtype=object)
    out[lx - lo: lx - lo + ax.size] += ax
    out[ly - lo: ly - lo + ay.size] += ay
    return lo, out


def _c_step(prev: _Row) -> _Row:
    m = len(prev) - 1
    row = []
    for ell in range(m + 2):
        parts = []
        if ell <= m:
            low, c = prev[ell]
            d = np.zeros(c.size + ell + 1, dtype=object)
            d[ell + 1:] += c
            d[: c.size] -= c
            parts.append((low - ell - 1, _geometric(d, ell)))
        if ell >= 1:
            low, c = prev[ell - 1]
            parts.append((low - ell, _geometric(c, ell - 1)))
        row.append(parts[0] if len(parts) == 1 else _add(*parts))
    return row


def _c_row(m: int) -> _Row:
    """Row ``m`` of the c-triangle; only the first rows are kept."""
    with _C_LOCK:
        while len(_C_ROWS) <= min(m, _C_CACHE_ROWS):
            _C_ROWS.append(_c_step(_C_ROWS[-1]))
        if m < len(_C_ROWS):
            return _C_ROWS[m]
        if m in _C_LAST:
            return _C_LAST[m]
        k, row = max(((k, r) for k, r in _C_LAST.items() if k < m), default=(len(_C_ROWS) - 1, _C_ROWS[-1]))
        for _ in range(m - k):
            row = _c_step(row)
        _C_LAST.clear()
        _C_LAST[m] = row
        return row


def superfluous_coefficients(m_max: int) -> list[list[ExactLaurent]]:
    """Integer Laurent coefficients ``c[m][l]`` for ``m <= m_max``.

    ``c[0][0] = 1``;
    ``c[m+1][l] = c[m][l] (1 - z^(-l-1)) b_l + c[m][l-1] z^(-l) b_(l-1)``
    with ``b_l = 1 + z + ... + z^l``.
    """
    return [[ExactLaurent(a.tolist(), low) for low, a in _c_row(m)] for m in range(m_max + 1)]


def _finish(acc: ExactLaurent, n: int, what: str) -> ExactPoly:
    try:
        poly = acc.to_poly()
    except NegativePowerError as exc:
        raise ConsistencyError(f"{what}(n={n}): {exc}") from None
    return poly / math.factorial(n)


def pgf_superfluous(n: int) -> ExactPoly:
    """pgf of S via the ``c[m][l]`` triangle: ``(1/n!) sum_l c[n-1][l] b_l``."""
    _check_n(n)
    acc = (0, np.zeros(0, dtype=object))
    for ell, (low, c) in enumerate(_c_row(n - 1)):
        acc = _add(acc, (low, _geometric(c, ell)))
    return _finish(ExactLaurent(acc[1].tolist(), acc[0]), n, "pgf_superfluous")


def pgf_superfluous_closed(n: int) -> ExactPoly:
    """pgf of S from the explicit path-sum expression.

    ``(1/n!) sum_r z^-C(n-r,2) (prod_{k<n-r} b_k) A_{n,r}`` where ``A_{n,r}``
    sums ``prod_j (1 - z^(-l_j-1)) b_{l_j}`` over all
    ``0 <= l_1 <= ... <= l_r <= n-1-r``.
    """
    _check_n(n, CLOSED_FORM_MAX_N)
    one = ExactLaurent((1,))

    def weight(ell: int) -> ExactLaurent:
        return (one - one.shift(-ell - 1)).mul_geometric(ell)

    acc = ExactLaurent()
    for r in range(n):
        prefix = one
        for k in range(n - r):
            prefix = prefix.mul_geometric(k)
        prefix = prefix.shift(-math.comb(n - r, 2))
        weights = [weight(ell) for ell in range(n - r)]
        a_nr = ExactLaurent()
        for ells in combinations_with_replacement(range(n - r), r):
            term = one
            for ell in ells:
                term = term * weights[ell]
            a_nr = a_nr + term
        acc = acc + prefix * a_nr
    return _finish(acc, n, "pgf_superfluous_closed")


# extraction -----------------------------------------------------------------

def factorial_moment(p: ExactLaurent, r: int) -> Fraction:
    """``E X(X-1)...(X-r+1)``: the r-th derivative of the pgf at z = 1."""
    if p.evaluate(1) != 1:
        raise ValueError(f"pgf is not normalised: p(1) = {p.evaluate(1)}")
    if r < 0:
        raise ValueError("r must be >= 0")
    for _ in range(r):
        p = p.derivative()
    return Fraction(p.evaluate(1))


def distribution_from_pgf(p: ExactPoly, n: int) -> DistributionTable:
    """Scale a pgf on the population of ``n!`` tableaux to integer counts."""
    if p.evaluate(1) != 1:
        raise ValueError(f"pgf is not normalised: p(1) = {p.evaluate(1)}")
    if not p.is_polynomial():
        raise NegativePowerError("pgf has negative powers")
    scale = math.factorial(n)
    counts = {}
    for e, c in p.terms().items():
        v = Fraction(c) * scale
        if v.denominator != 1 or v < 0:
            raise ValueError(f"coefficient of z^{e} times {n}! is {v}, not a non-negative integer")
        counts[e] = int(v)
    return DistributionTable(n, counts)


def pgf(stat: str, n: int) -> ExactPoly:
    """pgf by statistic name: U, F, R, C, S (or the long CLI names)."""
    builders = {
        "U": pgf_unrestricted,
        "F": pgf_first_row,
        "R": pgf_rows,
        "C": pgf_columns,
        "S": pgf_superfluous,
    }
    key = STAT_ALIASES.get(stat, stat)
    if key not in builders:
        raise KeyError(f"no pgf for statistic {stat!r}")
    return builders[key](n)


STAT_ALIASES = {
    "unrestricted": "U",
    "first-row": "F",
    "rows": "R",
    "columns": "C",
    "superfluous": "S",
    "total-ones": "Y",
}


@dataclass(frozen=True)
class MomentTable:
    n: int
    mean_U: Fraction
    var_U: Fraction
    mean_F: Fraction
    var_F: Fraction
    cov_FU: Fraction
    mean_R: Fraction
    var_R: Fraction
    mean_S: Fraction
    var_S: Fraction
    fact2_S: Fraction  # E S(S-1)

    def as_dict(self) -> dict[str, Fraction | int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def moment_formulas(n: int) -> MomentTable:
    """Closed-form moments of the tableau statistics at length n."""
    _check_n(n, 10**9)
    h1, h2 = harmonic(n), harmonic(n, 2)
    if n >= 2:
        var_s = Fraction((n - 2) * (2 * n * n + 11 * n - 1), 360)
        fact2_s = Fraction((n - 2) * (n - 3) * (5 * n * n - n - 16), 720)
    else:
        var_s = fact2_s = Fraction(0)
    return MomentTable(
        n=n,
        mean_U=h1,
        var_U=h1 - h2,
        mean_F=h1 - 1,
        var_F=h1 - h2,
        cov_FU=-(h2 - 1),
        mean_R=Fraction(n + 1, 2),
        var_R=Fraction(n + 1, 12),
        mean_S=Fraction((n - 1) * (n - 2), 12),
        var_S=var_s,
        fact2_S=fact2_s,
    )


def _mean_var(p: ExactPoly) -> tuple[Fraction, Fraction]:
    m1 = factorial_moment(p, 1)
    m2 = factorial_moment(p, 2)
    return m1, m2 + m1 - m1 * m1


def moments_from_pgfs(n: int) -> MomentTable:
    """The same table, extracted by differentiating the exact pgfs."""
    mu, vu = _mean_var(pgf_unrestricted(n))
    joint = pgf_joint_first_unrestricted(n)
    mf, vf = _mean_var(joint.at_w(1))
    cov = Fraction(joint.mixed_moment(1, 1)) - mf * Fraction(joint.mixed_moment(0, 1))
    mr, vr = _mean_var(pgf_rows(n))
    ps = pgf_superfluous(n)
    ms, vs = _mean_var(ps)
    return MomentTable(n, mu, vu, mf, vf, cov, mr, vr, ms, vs, factorial_moment(ps, 2))
