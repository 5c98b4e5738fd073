"""Exact univariate Laurent polynomials and bivariate polynomials.

Coefficients are Python ints or :class:`fractions.Fraction`; integral
fractions are stored as ints so integer-only computations stay fast.
Univariate polynomials are dense: a lowest exponent plus a coefficient
tuple, trimmed of zeros at both ends.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

__all__ = ["ExactLaurent", "ExactPoly", "ExactBiPoly", "NegativePowerError"]


class NegativePowerError(ValueError):
    """A polynomial was required but negative powers remain."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, Rational):
        return _norm(Fraction(c))
    raise TypeError(f"coefficient {c!r} is not rational")


def _is_scalar(x) -> bool:
    return isinstance(x, Rational)


class ExactLaurent:
    __slots__ = ("low", "coeffs")

    def __init__(self, coeffs: Iterable = (), low: int = 0):
        cs = [_norm(c) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        end = len(cs)
        while end > start and cs[end - 1] == 0:
            end -= 1
        self.low = low + start if end > start else 0
        self.coeffs = tuple(cs[start:end])
        self._check()

    def _check(self) -> None:
        pass

    # construction -----------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping[int, object]):
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls((terms.get(e, 0) for e in range(lo, hi + 1)), lo)

    @classmethod
    def monomial(cls, exp: int, coeff=1):
        return cls((coeff,), exp)

    @classmethod
    def constant(cls, c):
        return cls((c,), 0)

    @classmethod
    def geometric(cls, ell: int):
        """``1 + z + ... + z**ell`` (zero for ell < 0)."""
        return cls((1,) * (ell + 1), 0)

    def _new(self, coeffs, low, other=None):
        out = ExactLaurent(coeffs, low)
        keep_poly = isinstance(self, ExactPoly) and (
            other is None or isinstance(other, ExactPoly) or _is_scalar(other)
        )
        return ExactPoly(out.coeffs, out.low) if keep_poly and out.is_polynomial() else out

    # inspection -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def min_exp(self) -> int | None:
        return self.low if self.coeffs else None

    @property
    def max_exp(self) -> int | None:
        return self.low + len(self.coeffs) - 1 if self.coeffs else None

    def terms(self) -> dict[int, int | Fraction]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def __getitem__(self, exp: int):
        i = exp - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_polynomial(self) -> bool:
        return not self.coeffs or self.low >= 0

    def to_poly(self) -> "ExactPoly":
        if not self.is_polynomial():
            raise NegativePowerError(f"negative powers down to z^{self.low} remain")
        return ExactPoly(self.coeffs, self.low)

    def __eq__(self, other) -> bool:
        if _is_scalar(other):
            other = ExactLaurent.constant(other)
        if not isinstance(other, ExactLaurent):
            return NotImplemented
        return self.low == other.low and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"{type(self).__name__}(0)"
        parts = [f"{c}*z^{e}" for e, c in self.terms().items()]
        return f"{type(self).__name__}({' + '.join(parts)})"

    # arithmetic -------------------------------------------------------
    def __neg__(self):
        return self._new([-c for c in self.coeffs], self.low)

    def __add__(self, other):
        if _is_scalar(other):
            other = ExactPoly.constant(other)
        if not isinstance(other, ExactLaurent):
            return NotImplemented
        if not self.coeffs:
            return other._new(other.coeffs, other.low, self)
        if not other.coeffs:
            return self._new(self.coeffs, self.low, other)
        lo = min(self.low, other.low)
        hi = max(self.max_exp, other.max_exp)
        out = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs, self.low - lo):
            out[i] = c
        for i, c in enumerate(other.coeffs, other.low - lo):
            out[i] += c
        return self._new(out, lo, other)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return self._new([c * other for c in self.coeffs], self.low, other)
        if not isinstance(other, ExactLaurent):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return self._new((), 0, other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        for j, cb in enumerate(b):
            if cb == 0:
                continue
            for i, ca in enumerate(a):
                out[i + j] += ca * cb
        return self._new(out, self.low + other.low, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        f = Fraction(other)
        return self._new([Fraction(c) / f for c in self.coeffs], self.low, other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers not supported")
        result = self._new((1,), 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int):
        """Multiply by ``z**k``."""
        return self._new(self.coeffs, self.low + k) if self.coeffs else self

    def mul_geometric(self, ell: int):
        """Multiply by ``1 + z + ... + z**ell`` in linear time (sliding sum)."""
        if ell < 0 or not self.coeffs:
            return self._new((), 0)
        a = self.coeffs
        out = []
        acc = 0
        for i in range(len(a) + ell):
            if i < len(a):
                acc += a[i]
            if i - ell - 1 >= 0:
                acc -= a[i - ell - 1]
            out.append(acc)
        return self._new(out, self.low)

    def derivative(self):
        out = [(self.low + i) * c for i, c in enumerate(self.coeffs)]
        return self._new(out, self.low - 1)

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Exact value at a rational point (Horner)."""
        if not self.coeffs:
            return 0
        x = _norm(x)
        if self.low < 0 and x == 0:
            raise ZeroDivisionError("negative power evaluated at 0")
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        scale = Fraction(x) ** self.low if self.low else 1
        return _norm(acc * scale)

    # serialisation ----------------------------------------------------
    def to_json(self, var: str = "z") -> dict:
        terms = []
        for e, c in self.terms().items():
            f = Fraction(c)
            terms.append({"exp": e, "num": str(f.numerator), "den": str(f.denominator)})
        return {"var": var, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "ExactLaurent":
        terms = {int(t["exp"]): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]}
        return cls.from_terms(terms)


class ExactPoly(ExactLaurent):
    """Laurent polynomial restricted to non-negative exponents."""

    __slots__ = ()

    def _check(self) -> None:
        if self.coeffs and self.low < 0:
            raise NegativePowerError(f"ExactPoly with exponent {self.low}")

    @property
    def degree(self) -> int:
        return -1 if not self.coeffs else self.max_exp

    def dense(self) -> list:
        """Coefficients of ``z**0 .. z**degree``."""
        return [self[e] for e in range(self.degree + 1)]

    def divmod(self, divisor: "ExactPoly") -> tuple["ExactPoly", "ExactPoly"]:
        """Polynomial long division over the rationals."""
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = self.dense()
        d = divisor.dense()
        lead = Fraction(d[-1])
        quot = [0] * max(len(rem) - len(d) + 1, 0)
        for i in range(len(rem) - len(d), -1, -1):
            q = Fraction(rem[i + len(d) - 1]) / lead
            quot[i] = q
            if q:
                for j, c in enumerate(d):
                    rem[i + j] -= q * c
        return ExactPoly(quot), ExactPoly(rem[: len(d) - 1])


class ExactBiPoly:
    """Sparse polynomial in ``z`` and ``w`` keyed by ``(exp_z, exp_w)``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise NegativePowerError("ExactBiPoly exponents must be non-negative")
            c = _norm(c)
            if c != 0:
                clean[(int(i), int(j))] = c
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def z(cls):
        return cls({(1, 0): 1})

    @classmethod
    def w(cls):
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    def __eq__(self, other) -> bool:
        if _is_scalar(other):
            other = ExactBiPoly.constant(other)
        if not isinstance(other, ExactBiPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"ExactBiPoly({self.terms})"

    def __add__(self, other):
        if _is_scalar(other):
            other = ExactBiPoly.constant(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return ExactBiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ExactBiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if _is_scalar(other):
            return ExactBiPoly({k: c * other for k, c in self.terms.items()})
        out: dict[tuple[int, int], object] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return ExactBiPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        f = Fraction(other)
        return ExactBiPoly({k: Fraction(c) / f for k, c in self.terms.items()})

    def evaluate(self, z, w):
        return _norm(sum(Fraction(c) * Fraction(z) ** i * Fraction(w) ** j for (i, j), c in self.terms.items()))

    def at_w(self, w) -> ExactPoly:
        """Substitute a rational ``w``; result is a polynomial in ``z``."""
        out: dict[int, object] = {}
        for (i, j), c in self.terms.items():
            out[i] = out.get(i, 0) + c * Fraction(w) ** j
        return ExactPoly.from_terms(out)

    def at_z(self, z) -> ExactPoly:
        """Substitute a rational ``z``; result is a polynomial in ``w``."""
        out: dict[int, object] = {}
        for (i, j), c in self.terms.items():
            out[j] = out.get(j, 0) + c * Fraction(z) ** i
        return ExactPoly.from_terms(out)

    def mixed_moment(self, a: int, b: int):
        """``sum c * i**a * j**b``: E[Z^a W^b] when self is a joint pgf."""
        return _norm(sum(Fraction(c) * i**a * j**b for (i, j), c in self.terms.items()))

    def to_json(self) -> dict:
        terms = []
        for (i, j), c in self.terms.items():
            f = Fraction(c)
            terms.append({"exp": i, "exp_w": j, "num": str(f.numerator), "den": str(f.denominator)})
        return {"var": "z", "var_w": "w", "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "ExactBiPoly":
        return cls({(int(t["exp"]), int(t["exp_w"])): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]})
