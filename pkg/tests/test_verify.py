from fractions import Fraction

import pytest

from permtab import exact, verify
from permtab.verify import SUITES, rising, run_suite


@pytest.mark.parametrize(
    "suite, nmax",
    [("equidistribution", 6), ("pgf-cross", 14), ("measure-change", 6), ("moments", 25), ("covariances", 7)],
)
def test_suites_pass(suite, nmax):
    checks = list(run_suite(suite, nmax))
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed][:1]


def test_unknown_suite():
    with pytest.raises(KeyError):
        list(run_suite("nope", 3))


@pytest.mark.parametrize("suite", list(SUITES))
def test_nmax_bounds(suite):
    _, cap = verify.SUITE_LIMITS[suite]
    with pytest.raises(ValueError):
        list(run_suite(suite, cap + 1))
    with pytest.raises(ValueError):
        list(run_suite(suite, 0))


def test_stops_at_first_failure(monkeypatch):
    real = exact.moment_formulas

    def broken(n):
        m = real(n)
        return m if n < 5 else type(m)(**{**m.as_dict(), "var_S": m.var_S + 1})

    monkeypatch.setattr(exact, "moment_formulas", broken)
    checks = list(run_suite("moments", 10))
    assert [c.passed for c in checks] == [True, True, True, False]
    assert "var_S" in checks[-1].name


def test_rising_factorial():
    assert rising(2, 0) == 1
    assert rising(2, 3) == 2 * 3 * 4
    assert rising(Fraction(1, 2), 2) == Fraction(3, 4)
