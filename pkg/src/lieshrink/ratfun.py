"""The rational function field Q(r), canonicalized so limits at 0 are syntactic.

A value is ``num/den`` where ``den`` is a monic genuine polynomial with
nonzero constant term and ``num`` is a Laurent polynomial coprime to ``den``
(all powers of r are factored out of the denominator into the numerator's
exponents).  Under this normal form, ``f`` has a pole at r=0 exactly when the
numerator has a negative-exponent term, and the r->0 limit of a pole-free
value is ``num(0)/den(0)`` -- a constant-time read.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly, format_laurent, parse_laurent, poly_divexact, poly_gcd


class PoleAtZero(ArithmeticError):
    """The r->0 limit is infinite; ``order`` is the pole order."""

    def __init__(self, value: "RatFun"):
        self.order = -value.num.valuation()
        super().__init__(f"pole of order {self.order} at r=0 in {value}")


class RatFun:
    """Immutable element of Q(r) in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = _as_laurent(num)
        den = LaurentPoly.one() if den is None else _as_laurent(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in Q(r)")
        num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> RatFun:
        return RatFun(LaurentPoly.zero())

    @staticmethod
    def one() -> RatFun:
        return RatFun(LaurentPoly.one())

    @staticmethod
    def const(c) -> RatFun:
        return RatFun(LaurentPoly.const(c))

    @staticmethod
    def monomial(exp: int, coeff=1) -> RatFun:
        return RatFun(LaurentPoly.monomial(exp, coeff))

    @staticmethod
    def var() -> RatFun:
        return RatFun(LaurentPoly.var())

    @staticmethod
    def parse(text: str) -> RatFun:
        return RatFun(parse_laurent(text))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        """True when the denominator is trivial."""
        return self.den == LaurentPoly.one()

    def is_constant(self) -> bool:
        return self.is_laurent() and self.num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.num.constant_value()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> RatFun:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RatFun:
        return RatFun(-self.num, self.den)

    def __sub__(self, other) -> RatFun:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> RatFun:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> RatFun:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RatFun:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(r)")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> RatFun:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def inverse(self) -> RatFun:
        return RatFun.one() / self

    def __pow__(self, n: int) -> RatFun:
        if n < 0:
            return self.inverse() ** (-n)
        return RatFun(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.num, self.den)))
        return self._hash

    # -- limits and evaluation ----------------------------------------------

    def has_pole_at_zero(self) -> bool:
        return self.num.valuation() < 0

    def pole_order(self) -> int:
        return max(0, -self.num.valuation())

    def limit0(self) -> Fraction:
        """The r->0 limit; raises PoleAtZero when it is infinite."""
        if self.has_pole_at_zero():
            raise PoleAtZero(self)
        return self.num.coeff(0) / self.den.coeff(0)

    def __call__(self, point) -> Fraction:
        point = Fraction(point)
        den_val = self.den(point)
        if den_val == 0:
            raise ZeroDivisionError(f"denominator vanishes at r={point}")
        return self.num(point) / den_val

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if self.is_laurent():
            return format_laurent(self.num)
        num = format_laurent(self.num)
        den = format_laurent(self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFun({str(self)!r})"


def _as_laurent(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly.const(value)
    if isinstance(value, str):
        return parse_laurent(value)
    raise TypeError(f"cannot build Q(r) element from {value!r}")


def _coerce(value):
    if isinstance(value, RatFun):
        return value
    if isinstance(value, (int, Fraction, LaurentPoly)):
        return RatFun(value)
    return NotImplemented


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return num, LaurentPoly.one()
    # factor every power of r out of the denominator into the numerator
    vden = den.valuation()
    if vden:
        den = den.shift(-vden)
        num = num.shift(-vden)
    # cancel the polynomial content of the numerator against the denominator
    vnum = num.valuation()
    num_poly = num.shift(-vnum)
    g = poly_gcd(num_poly, den)
    if g.degree() > 0:
        num_poly = poly_divexact(num_poly, g)
        den = poly_divexact(den, g)
    lead = den.leading_coeff()
    if lead != 1:
        den = den.scale(1 / lead)
        num_poly = num_poly.scale(1 / lead)
    return num_poly.shift(vnum), den


def ratfun_limit0(f: RatFun) -> Fraction:
    """Module-level alias for the r->0 limit."""
    return f.limit0()
