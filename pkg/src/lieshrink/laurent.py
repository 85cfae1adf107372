"""Laurent polynomials in one parameter ``r`` with exact rational coefficients.

A Laurent polynomial is stored as a sparse map ``{exponent: coefficient}``
with integer exponents (possibly negative) and nonzero ``Fraction``
coefficients.  The canonical form never stores zero coefficients, so equality
of values is equality of the maps.

Scaling-family entries such as ``r^2``, ``-1/2`` or ``r - 2*r^-1`` all live
here; the quotient field is in :mod:`lieshrink.ratfun`.
"""

from __future__ import annotations

from fractions import Fraction


class LaurentParseError(ValueError):
    """Raised on malformed Laurent expressions; carries the offset in ``pos``."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class LaurentPoly:
    """Immutable sparse Laurent polynomial over the rationals."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    clean[int(exp)] = coeff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> LaurentPoly:
        return LaurentPoly()

    @staticmethod
    def one() -> LaurentPoly:
        return LaurentPoly({0: Fraction(1)})

    @staticmethod
    def const(c) -> LaurentPoly:
        return LaurentPoly({0: Fraction(c)})

    @staticmethod
    def monomial(exp: int, coeff=1) -> LaurentPoly:
        return LaurentPoly({exp: Fraction(coeff)})

    @staticmethod
    def var() -> LaurentPoly:
        """The parameter r itself."""
        return LaurentPoly({1: Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(0, Fraction(0))

    def valuation(self) -> int:
        """Smallest exponent with nonzero coefficient (0 for the zero poly)."""
        return min(self.terms) if self.terms else 0

    def degree(self) -> int:
        return max(self.terms) if self.terms else 0

    def leading_coeff(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[self.degree()]

    def coeff(self, exp: int) -> Fraction:
        return self.terms.get(exp, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + coeff
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> LaurentPoly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by r**k."""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def scale(self, c) -> LaurentPoly:
        c = Fraction(c)
        return LaurentPoly({e: c * v for e, v in self.terms.items()})

    def __call__(self, point) -> Fraction:
        """Evaluate at a nonzero rational point (or at 0 when no negative exponents)."""
        point = Fraction(point)
        if point == 0 and self.valuation() < 0:
            raise ZeroDivisionError("evaluation at 0 with negative exponents")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            if point == 0:
                total += coeff if exp == 0 else 0
            else:
                total += coeff * point**exp
        return total

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(tuple(sorted(self.terms.items()))))
        return self._hash

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        return format_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_laurent(self)!r})"


def _coerce(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly.const(value)
    return NotImplemented


# -- canonical printing ----------------------------------------------------


def _format_monomial(exp: int, coeff: Fraction) -> str:
    if exp == 0:
        return str(coeff)
    if exp == 1:
        mono = "r"
    else:
        mono = f"r^{exp}"
    if coeff == 1:
        return mono
    if coeff == -1:
        return f"-{mono}"
    return f"{coeff}*{mono}"


def format_laurent(p: LaurentPoly) -> str:
    """Canonical text form: terms by descending exponent, explicit signs."""
    if not p.terms:
        return "0"
    parts: list[str] = []
    for exp in sorted(p.terms, reverse=True):
        term = _format_monomial(exp, p.terms[exp])
        if not parts:
            parts.append(term)
        elif term.startswith("-"):
            parts.append(f"- {term[1:]}")
        else:
            parts.append(f"+ {term}")
    return " ".join(parts)


# -- parsing ----------------------------------------------------------------
#
# expr := ('+'|'-')? term (('+'|'-') term)*
# term := rat ('*'? mono)? | mono
# mono := 'r' ('^' int)?
# rat  := int ('/' uint)?
#
# Whitespace is ignored everywhere.  The optional leading sign admits entries
# such as "-r^3" that appear in scaling matrices.


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def error(self, message: str):
        raise LaurentParseError(message, self.pos)

    def read_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected digits")
        return int(self.text[start : self.pos])

    def read_int(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        elif self.peek() == "+":
            self.take()
        return sign * self.read_uint()

    def read_mono_exp(self) -> int:
        # caller consumed 'r'
        if self.peek() == "^":
            self.take()
            return self.read_int()
        return 1

    def read_term(self) -> tuple[int, Fraction]:
        ch = self.peek()
        if ch == "r":
            self.take()
            return self.read_mono_exp(), Fraction(1)
        if not (ch.isdigit() or ch in "+-"):
            self.error("expected a rational or 'r'")
        num = self.read_int()
        den = 1
        if self.peek() == "/":
            self.take()
            den = self.read_uint()
            if den == 0:
                self.error("zero denominator")
        coeff = Fraction(num, den)
        if self.peek() == "*":
            self.take()
            if self.peek() != "r":
                self.error("expected 'r' after '*'")
        if self.peek() == "r":
            self.take()
            return self.read_mono_exp(), coeff
        return 0, coeff


def parse_laurent(text: str) -> LaurentPoly:
    """Parse an expression like ``r - 2*r^-1`` into canonical form."""
    scanner = _Scanner(text)
    terms: dict[int, Fraction] = {}
    negate = False
    if scanner.peek() == "-":
        scanner.take()
        negate = True
    elif scanner.peek() == "+":
        scanner.take()
    while True:
        exp, coeff = scanner.read_term()
        if negate:
            coeff = -coeff
        terms[exp] = terms.get(exp, Fraction(0)) + coeff
        op = scanner.peek()
        if op == "":
            break
        if op not in "+-":
            scanner.error(f"unexpected character {op!r}")
        scanner.take()
        negate = op == "-"
    return LaurentPoly(terms)


# -- genuine-polynomial helpers (valuation >= 0) ----------------------------


def poly_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Division with remainder in Q[r]; both arguments must have valuation >= 0."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.valuation() < 0 or b.valuation() < 0:
        raise ValueError("divmod requires genuine polynomials")
    quotient: dict[int, Fraction] = {}
    rem = a
    db, lb = b.degree(), b.leading_coeff()
    while not rem.is_zero() and rem.degree() >= db:
        exp = rem.degree() - db
        coeff = rem.leading_coeff() / lb
        quotient[exp] = coeff
        rem = rem - b.shift(exp).scale(coeff)
    return LaurentPoly(quotient), rem


def poly_divexact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    q, rem = poly_divmod(a, b)
    if not rem.is_zero():
        raise ArithmeticError(f"inexact division: ({a}) / ({b})")
    return q


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd in Q[r] (valuation >= 0 required)."""
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    if a.is_zero():
        return a
    return a.scale(1 / a.leading_coeff())
