"""Permutation tableaux: data model, rule checking, statistics, text format.

A permutation tableau is a Ferrers diagram (weakly decreasing row lengths,
empty rows allowed at the bottom) filled with 0s and 1s so that

1. every column contains at least one 1, and
2. no 0 has a 1 above it in its column and a 1 to its left in its row.

Rows are indexed top to bottom, columns left to right, both from 0.  The
length of a tableau is ``rows + columns``.

Text format (one record)::

    shape: 7,5,5,3,1,0
    0010011
    00101
    01111
    000
    1
    <empty line for the zero-length row>

Every line is LF-terminated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

__all__ = [
    "Tableau",
    "StatVector",
    "Violation",
    "TableauError",
    "TableauFormatError",
    "find_violations",
    "validate",
    "compute_stats",
    "encode",
    "decode",
    "iter_decode",
    "FIGURE1",
]


class Violation(NamedTuple):
    """One broken rule.  ``row``/``column`` are 0-based, or None if n/a."""

    kind: str  # "dimension" | "shape" | "column" | "pattern"
    row: int | None
    column: int | None
    message: str


class TableauError(ValueError):
    """Raised when a candidate filling is not a permutation tableau."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


class TableauFormatError(ValueError):
    """Raised when tableau text cannot be parsed."""


class StatVector(NamedTuple):
    rows: int
    columns: int
    unrestricted: int
    first_row_ones: int
    superfluous: int
    total_ones: int

    @property
    def length(self) -> int:
        return self.rows + self.columns


@dataclass(frozen=True)
class Tableau:
    """An immutable 0/1 filling of a Ferrers shape.

    Construction does not check the filling rules; use :func:`validate`
    for untrusted input.  The growth process builds tableaux directly.
    """

    shape: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.shape)

    @property
    def n_columns(self) -> int:
        return self.shape[0] if self.shape else 0

    @property
    def length(self) -> int:
        return self.n_rows + self.n_columns

    @cached_property
    def _scan(self) -> tuple[tuple[int, ...], int, int]:
        # top-down column scan; a row is restricted once it holds a 0 under a 1
        restricted = [False] * self.n_rows
        superfluous = 0
        ones = 0
        for c in range(self.n_columns):
            seen_one = False
            for r in range(self.n_rows):
                if self.shape[r] <= c:
                    break
                if self.rows[r][c]:
                    ones += 1
                    if seen_one:
                        superfluous += 1
                    seen_one = True
                elif seen_one:
                    restricted[r] = True
        unrestricted = tuple(r for r in range(self.n_rows) if not restricted[r])
        return unrestricted, superfluous, ones

    @property
    def unrestricted_rows(self) -> tuple[int, ...]:
        """Indices of rows without a restricted 0, top to bottom."""
        return self._scan[0]

    def stats(self) -> StatVector:
        return compute_stats(self)

    def __str__(self) -> str:
        return encode(self)


def _as_bits(row: Sequence[int] | str) -> tuple[int, ...] | None:
    out = []
    for x in row:
        if x in (0, 1) and not isinstance(x, bool) or x in ("0", "1"):
            out.append(int(x))
        else:
            return None
    return tuple(out)


def find_violations(shape: Sequence[int], fill: Sequence[Sequence[int] | str]) -> list[Violation]:
    """Return every rule the candidate breaks (empty list if it is valid)."""
    shape = tuple(shape)
    found: list[Violation] = []
    if not shape:
        found.append(Violation("shape", None, None, "a tableau needs at least one row"))
        return found
    for r, length in enumerate(shape):
        if not isinstance(length, int) or length < 0:
            found.append(Violation("shape", r, None, f"row {r}: length {length!r} is not a non-negative integer"))
            return found
    for r in range(len(shape) - 1):
        if shape[r] < shape[r + 1]:
            found.append(
                Violation("shape", r + 1, None, f"row {r + 1}: length {shape[r + 1]} exceeds row {r} length {shape[r]}")
            )
    if len(fill) != len(shape):
        found.append(Violation("dimension", None, None, f"shape has {len(shape)} rows but fill has {len(fill)}"))
        return found
    rows = []
    for r, (length, row) in enumerate(zip(shape, fill)):
        bits = _as_bits(row)
        if bits is None:
            found.append(Violation("dimension", r, None, f"row {r}: entries must be 0 or 1"))
        elif len(bits) != length:
            found.append(Violation("dimension", r, None, f"row {r}: expected {length} cells, got {len(bits)}"))
        rows.append(bits)
    if found:
        return found

    width = shape[0]
    for c in range(width):
        seen_one = False
        for r in range(len(shape)):
            if shape[r] <= c:
                break
            if rows[r][c]:
                seen_one = True
            elif seen_one and any(rows[r][:c]):
                found.append(
                    Violation("pattern", r, c, f"cell ({r}, {c}): 0 with a 1 above it and a 1 to its left")
                )
        if not seen_one:
            found.append(Violation("column", None, c, f"column {c}: contains no 1"))
    return found


def validate(shape: Sequence[int], fill: Sequence[Sequence[int] | str]) -> Tableau:
    """Build a :class:`Tableau`, raising :class:`TableauError` listing all violations."""
    problems = find_violations(shape, fill)
    if problems:
        raise TableauError(problems)
    return Tableau(tuple(shape), tuple(_as_bits(row) for row in fill))


def compute_stats(t: Tableau) -> StatVector:
    unrestricted, superfluous, ones = t._scan
    first = sum(t.rows[0]) if t.rows else 0
    return StatVector(
        rows=t.n_rows,
        columns=t.n_columns,
        unrestricted=len(unrestricted),
        first_row_ones=first,
        superfluous=superfluous,
        total_ones=ones,
    )


def encode(t: Tableau) -> str:
    lines = ["shape: " + ",".join(map(str, t.shape))]
    lines.extend("".join(map(str, row)) for row in t.rows)
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[int, ...]:
    if not line.startswith("shape:"):
        raise TableauFormatError(f"expected 'shape:' header, got {line!r}")
    body = line[len("shape:"):].strip()
    if not body:
        raise TableauFormatError("empty shape")
    try:
        return tuple(int(x) for x in body.split(","))
    except ValueError:
        raise TableauFormatError(f"bad shape {body!r}") from None


def _parse_record(header: str, body: Sequence[str]) -> Tableau:
    shape = _parse_header(header)
    if len(body) != len(shape):
        raise TableauFormatError(f"shape lists {len(shape)} rows but {len(body)} row lines follow")
    for r, (length, line) in enumerate(zip(shape, body)):
        if set(line) - {"0", "1"}:
            raise TableauFormatError(f"row {r}: fill {line!r} has characters other than 0/1")
        if len(line) != length:
            raise TableauFormatError(f"row {r}: fill {line!r} has {len(line)} cells, shape says {length}")
    return validate(shape, body)


def _lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def decode(text: str) -> Tableau:
    """Parse a single record.  Raises TableauFormatError or TableauError."""
    lines = _lines(text)
    if not lines:
        raise TableauFormatError("empty input")
    shape = _parse_header(lines[0])
    if len(lines) != len(shape) + 1:
        raise TableauFormatError(f"shape lists {len(shape)} rows but {len(lines) - 1} row lines follow")
    return _parse_record(lines[0], lines[1:])


def iter_decode(text: str | Iterable[str]) -> Iterator[Tableau]:
    """Parse concatenated records; non-``shape:`` lines between records are skipped."""
    lines = _lines(text) if isinstance(text, str) else [s.rstrip("\n") for s in text]
    i = 0
    while i < len(lines):
        if not lines[i].startswith("shape:"):
            i += 1
            continue
        k = len(_parse_header(lines[i]))
        yield _parse_record(lines[i], lines[i + 1:i + 1 + k])
        i += k + 1


FIGURE1 = validate(
    (7, 5, 5, 3, 1, 0),
    ("0010011", "00101", "01111", "000", "1", ""),
)
