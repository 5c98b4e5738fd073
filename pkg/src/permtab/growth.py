"""The growth process: building tableaux of length k from length k-1.

A tableau grows from its south-west corner.  A *south* move appends an
empty row.  A *west* move prepends a new column covering every row: rows
containing a restricted 0 get a 0, the unrestricted rows get any 0/1
pattern with at least one 1.  After a west move the rows above the new
topmost 1 and the rows that received a 1 stay unrestricted; unrestricted
rows below the topmost 1 that received a 0 become restricted.

With ``U`` unrestricted rows there is one south extension and ``2**U - 1``
west extensions.  Extensions are ordered: south first, then west by the
position ``g`` of the topmost 1 among the unrestricted rows (1-based), then
by the fill of the ``U - g`` unrestricted rows below it read as a binary
number (row nearest the topmost 1 is the most significant bit).  The
0-based position in that order is the *extension index*; south is 0 and
west ``(g, fill)`` is ``2**U - 2**(U-g+1) + 1 + fill``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .rng import make_rng
from .tableau import Tableau

__all__ = [
    "ROOT",
    "ENUMERATE_MAX",
    "DP_STATE_LIMIT",
    "Extension",
    "SamplerConfig",
    "JointCountTable",
    "StateSpaceTooLarge",
    "extend",
    "iter_extensions",
    "extensions",
    "extension_index",
    "extension_from_index",
    "decompose",
    "parent",
    "enumerate_tableaux",
    "completions_count",
    "CODE_MAX_N",
    "path_code",
    "tableau_from_code",
    "sample_uniform",
    "sample_path_codes",
    "sample_stats",
    "joint_distribution_dp",
]

ROOT = Tableau((0,), ((),))  # the only tableau of length 1
ENUMERATE_MAX = 10
DP_STATE_LIMIT = 60_000_000  # cells in one DP layer array

STATS = ("U", "R", "F", "S")


class StateSpaceTooLarge(MemoryError):
    pass


class Extension(NamedTuple):
    kind: str  # "south" | "west"
    g: int | None = None
    below: tuple[int, ...] = ()

    @classmethod
    def south(cls) -> "Extension":
        return cls("south")


def extend(t: Tableau, ext: Extension) -> Tableau:
    if ext.kind == "south":
        return Tableau(t.shape + (0,), t.rows + ((),))
    unrestricted = t.unrestricted_rows
    u = len(unrestricted)
    g = ext.g
    if g is None or not 1 <= g <= u or len(ext.below) != u - g:
        raise ValueError(f"invalid west extension {ext} for a tableau with {u} unrestricted rows")
    column = [0] * t.n_rows
    column[unrestricted[g - 1]] = 1
    for r, bit in zip(unrestricted[g:], ext.below):
        column[r] = bit
    rows = tuple((column[r],) + row for r, row in enumerate(t.rows))
    return Tableau(tuple(x + 1 for x in t.shape), rows)


def _west_moves(u: int) -> Iterator[Extension]:
    for g in range(1, u + 1):
        width = u - g
        for fill in range(1 << width):
            yield Extension("west", g, tuple((fill >> (width - 1 - i)) & 1 for i in range(width)))


def iter_extensions(t: Tableau) -> Iterator[tuple[Extension, Tableau]]:
    """All ``2**U`` extensions of ``t`` in canonical order."""
    south = Extension.south()
    yield south, extend(t, south)
    for ext in _west_moves(len(t.unrestricted_rows)):
        yield ext, extend(t, ext)


def extensions(t: Tableau) -> list[Tableau]:
    return [child for _, child in iter_extensions(t)]


def extension_index(u: int, ext: Extension) -> int:
    if ext.kind == "south":
        return 0
    fill = 0
    for bit in ext.below:
        fill = (fill << 1) | bit
    return (1 << u) - (1 << (u - ext.g + 1)) + 1 + fill


def extension_from_index(u: int, index: int) -> Extension:
    if not 0 <= index < (1 << u):
        raise ValueError(f"extension index {index} out of range for U={u}")
    if index == 0:
        return Extension.south()
    rest = index - 1
    for g in range(1, u + 1):
        block = 1 << (u - g)
        if rest < block:
            width = u - g
            return Extension("west", g, tuple((rest >> (width - 1 - i)) & 1 for i in range(width)))
        rest -= block
    raise AssertionError("unreachable")


def decompose(t: Tableau) -> tuple[Tableau, Extension]:
    """Return the unique parent of ``t`` and the extension producing ``t``."""
    if t.length < 2:
        raise ValueError("the length-1 tableau has no parent in this model")
    if t.shape[-1] == 0:
        return Tableau(t.shape[:-1], t.rows[:-1]), Extension.south()
    par = Tableau(tuple(x - 1 for x in t.shape), tuple(row[1:] for row in t.rows))
    column = [row[0] for row in t.rows]
    unrestricted = par.unrestricted_rows
    bits = [column[r] for r in unrestricted]
    if any(column[r] for r in range(t.n_rows) if r not in set(unrestricted)) or 1 not in bits:
        raise ValueError("tableau is not an extension of its column-deleted parent")
    g = bits.index(1) + 1
    return par, Extension("west", g, tuple(bits[g:]))


def parent(t: Tableau) -> Tableau:
    return decompose(t)[0]


def enumerate_tableaux(n: int) -> Iterator[Tableau]:
    """Every tableau of length ``n``, depth first, south before west."""
    if not 1 <= n <= ENUMERATE_MAX:
        raise ValueError(f"enumeration supports 1 <= n <= {ENUMERATE_MAX}, got {n}")

    def walk(t: Tableau, k: int) -> Iterator[Tableau]:
        if k == n:
            yield t
            return
        for child in extensions(t):
            yield from walk(child, k + 1)

    return walk(ROOT, 1)


def completions_count(t: Tableau, n: int) -> int:
    """Number of length-``n`` tableaux whose growth path passes through ``t``."""
    k = t.length
    if k > n:
        raise ValueError(f"tableau length {k} exceeds target {n}")
    return math.factorial(n - k) * (n - k + 1) ** len(t.unrestricted_rows)


# Path codes: the extension index of the step producing length k is below
# 2**U_{k-1} <= 2**(k-1), so it gets k-1 bits starting at bit (k-1)(k-2)/2.
# Codes are injective and fit in an int64 for n <= 11.
CODE_MAX_N = 11


def _code_offset(k: int) -> int:
    return (k - 1) * (k - 2) // 2


def path_code(t: Tableau) -> int:
    code = 0
    cur = t
    while cur.length > 1:
        k = cur.length
        par, ext = decompose(cur)
        code |= extension_index(len(par.unrestricted_rows), ext) << _code_offset(k)
        cur = par
    return code


def tableau_from_code(n: int, code: int) -> Tableau:
    t = ROOT
    for k in range(2, n + 1):
        u = len(t.unrestricted_rows)
        index = (code >> _code_offset(k)) & ((1 << (k - 1)) - 1)
        t = extend(t, extension_from_index(u, index))
    return t


@dataclass(frozen=True)
class SamplerConfig:
    n: int
    seed: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")


def _weight_total(u: int, m: int) -> int:
    return sum(math.comb(u, v - 1) * m**v for v in range(1, u + 2))


def sample_uniform(cfg: SamplerConfig, rng: np.random.Generator | None = None) -> Tableau:
    """Draw one tableau of length ``cfg.n`` uniformly at random.

    Each extension of a length-k tableau is taken with probability
    proportional to ``m**U_new`` where ``m = n - k``, the number of ways to
    complete it.  Concretely: the topmost-1 position ``G`` is geometric with
    success probability ``1/(m+1)``, capped at ``U+1`` which means a south
    move; each unrestricted row below it then gets a 1 with probability
    ``m/(m+1)``.
    """
    rng = make_rng(cfg.seed) if rng is None else rng
    t = ROOT
    for k in range(1, cfg.n):
        m = cfg.n - k
        u = len(t.unrestricted_rows)
        if __debug__ and u <= 64:
            assert _weight_total(u, m) == m * (m + 1) ** u
        g = min(int(rng.geometric(1.0 / (m + 1))), u + 1)
        if g > u:
            t = extend(t, Extension.south())
        else:
            bits = tuple(int(x) for x in rng.random(u - g) < m / (m + 1))
            t = extend(t, Extension("west", g, bits))
    return t


def sample_path_codes(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorised :func:`sample_uniform` returning path codes."""
    if not 1 <= n <= CODE_MAX_N:
        raise ValueError(f"path codes are limited to 1 <= n <= {CODE_MAX_N}")
    codes = np.zeros(size, dtype=np.int64)
    u = np.ones(size, dtype=np.int64)
    for k in range(1, n):
        m = n - k
        g = np.minimum(rng.geometric(1.0 / (m + 1), size=size), u + 1)
        west = g <= u
        nbelow = np.where(west, u - g, 0)
        bits = (rng.random((size, k)) < m / (m + 1)) & (np.arange(k) < nbelow[:, None])
        weights = np.left_shift(1, np.clip(nbelow[:, None] - 1 - np.arange(k), 0, None))
        fill = (bits * weights).sum(axis=1)
        index = np.where(west, (1 << u) - (1 << (u - g + 1)) + 1 + fill, 0)
        codes |= index << _code_offset(k + 1)
        u = np.where(west, g + bits.sum(axis=1), u + 1)
    return codes


def sample_stats(n: int, size: int, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Statistics of ``size`` independent uniform tableaux of length ``n``.

    Runs the same Markov chain as :func:`sample_uniform` on the state
    (U, R, F, S) without materialising the tableaux.  Returns arrays keyed
    by ``"U", "R", "F", "S", "C", "Y"``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    u = np.ones(size, dtype=np.int64)
    r = np.ones(size, dtype=np.int64)
    f = np.zeros(size, dtype=np.int64)
    s = np.zeros(size, dtype=np.int64)
    for k in range(1, n):
        m = n - k
        g = np.minimum(rng.geometric(1.0 / (m + 1), size=size), u + 1)
        west = g <= u
        kept = rng.binomial(np.where(west, u - g, 0), m / (m + 1))
        r += ~west
        f += g == 1
        s += kept
        u = np.where(west, g + kept, u + 1)
    c = n - r
    return {"U": u, "R": r, "F": f, "S": s, "C": c, "Y": s + c}


@dataclass(frozen=True)
class JointCountTable:
    n: int
    tracked: tuple[str, ...]
    counts: dict[tuple[int, ...], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def marginal(self, stat: str) -> dict[int, int]:
        i = self.tracked.index(stat)
        out: dict[int, int] = {}
        for key, c in self.counts.items():
            out[key[i]] = out.get(key[i], 0) + c
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "tracked": list(self.tracked),
            "counts": [{"key": list(k), "count": str(c)} for k, c in sorted(self.counts.items())],
            "total": str(self.total),
        }

    @classmethod
    def from_json(cls, data: dict) -> "JointCountTable":
        counts = {tuple(e["key"]): int(e["count"]) for e in data["counts"]}
        table = cls(int(data["n"]), tuple(data["tracked"]), counts)
        if table.total != int(data["total"]):
            raise ValueError("total does not match the sum of counts")
        return table


def _dims(k: int, tracked: Sequence[str]) -> tuple[int, ...]:
    size = {"R": k + 1, "F": k, "S": (k - 1) * (k - 2) // 2 + 1}
    return (k + 1,) + tuple(size[s] for s in tracked)


def _dp_axes(tracked: Iterable[str]) -> tuple[str, ...]:
    tracked = set(tracked)
    unknown = tracked - set(STATS)
    if unknown or not tracked:
        raise ValueError(f"track must be a nonempty subset of {STATS}, got {sorted(tracked)}")
    return tuple(s for s in STATS[1:] if s in tracked)


def joint_distribution_dp(n: int, track: Iterable[str]) -> JointCountTable:
    """Exact joint counts of the tracked statistics over all tableaux of length n.

    Forward dynamic programme over growth steps.  The state is U plus the
    tracked statistics; U is the only quantity the transitions depend on.
    A west move from U with topmost position g keeps each of the U-g rows
    below independently (1: row stays unrestricted and adds a superfluous
    1) or drops it (0: row becomes restricted).  That choice is applied one
    row at a time over layers indexed by the number of rows still
    undecided, so each step costs O(U * state size) big-integer additions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    track = tuple(track)
    axes = _dp_axes(track)
    keep_u = "U" in track
    ax = {s: i + 1 for i, s in enumerate(axes)}

    def span(shift: dict[str, int], shape: tuple[int, ...]) -> tuple:
        # non-U slices placing a source block of ``shape``, offset per stat
        return tuple(slice(shift.get(s, 0), shift.get(s, 0) + size) for s, size in zip(axes, shape[1:]))

    a = np.zeros(_dims(1, axes), dtype=object)
    a[(1,) + tuple(1 if s == "R" else 0 for s in axes)] = 1  # one empty row

    for k in range(1, n):
        dims = _dims(k + 1, axes)
        if math.prod(dims) > DP_STATE_LIMIT:
            raise StateSpaceTooLarge(f"DP state for n={n} with {axes} exceeds {DP_STATE_LIMIT} cells")
        src = a.shape
        b = np.zeros(dims, dtype=object)
        # south: U+1, R+1
        b[(slice(1, k + 2),) + span({"R": 1}, src)] += a
        # west, layered over the number t of undecided rows below the topmost 1
        layer = None
        same = span({}, src)
        for t in range(k - 1, -1, -1):
            if layer is None:
                layer = np.zeros(dims, dtype=object)
            else:
                kept = np.zeros(dims, dtype=object)
                dst = [slice(1, None)] + [slice(None)] * len(axes)
                sl = [slice(None, -1)] + [slice(None)] * len(axes)
                if "S" in ax:
                    dst[ax["S"]] = slice(1, None)
                    sl[ax["S"]] = slice(None, -1)
                kept[tuple(dst)] = layer[tuple(sl)]
                layer = layer + kept
            if k - t >= 2:
                layer[(slice(2, k - t + 1),) + same] += a[2 + t:k + 1]
            layer[(1,) + span({"F": 1}, src)] += a[1 + t]
        b += layer
        a = b

    if not keep_u:
        a = a.sum(axis=0)
    counts: dict[tuple[int, ...], int] = {}
    for idx in zip(*np.nonzero(a)):
        key = tuple(int(i) for i in idx)
        counts[key] = int(a[idx])
    tracked = (("U",) if keep_u else ()) + axes
    table = JointCountTable(n, tracked, dict(sorted(counts.items())))
    if table.total != math.factorial(n):
        raise AssertionError(f"DP mass {table.total} != {n}!")
    return table
