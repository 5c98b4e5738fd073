import itertools

import pytest
from hypothesis import strategies as st

from permtab.growth import ROOT, enumerate_tableaux, extend, extension_from_index
from permtab.tableau import find_violations


def weakly_decreasing(n_rows: int, first: int):
    """Row-length tuples of ``n_rows`` rows with the first row of length ``first``."""
    if n_rows == 0:
        return
    for rest in itertools.combinations_with_replacement(range(first, -1, -1), n_rows - 1):
        yield (first,) + rest


def brute_force_tableaux(n: int):
    """Every valid 0/1 filling of every shape of length n, found by trying them all."""
    for n_rows in range(1, n + 1):
        cols = n - n_rows
        for shape in weakly_decreasing(n_rows, cols):
            cells = sum(shape)
            for bits in itertools.product((0, 1), repeat=cells):
                fill, pos = [], 0
                for length in shape:
                    fill.append(bits[pos:pos + length])
                    pos += length
                if not find_violations(shape, fill):
                    yield shape, tuple(fill)


@st.composite
def tableaux(draw, max_length: int = 9):
    """A tableau grown by random extension choices."""
    n = draw(st.integers(1, max_length))
    t = ROOT
    for _ in range(n - 1):
        u = len(t.unrestricted_rows)
        t = extend(t, extension_from_index(u, draw(st.integers(0, 2**u - 1))))
    return t


@pytest.fixture(scope="session")
def levels():
    return {k: list(enumerate_tableaux(k)) for k in range(1, 8)}
