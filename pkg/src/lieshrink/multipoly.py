"""Sparse multivariate polynomials over Q.

Used for the skew forms whose entries are linear in the dual coordinates
xi_1..xi_n; rank over the fraction field is computed by fraction-free
elimination in :mod:`lieshrink.linalg`, which only needs ring arithmetic plus
exact division.
"""

from __future__ import annotations

from fractions import Fraction

Exponent = tuple[int, ...]


class MultiPoly:
    """Immutable polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict[Exponent, Fraction] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff == 0:
                    continue
                exp = tuple(int(e) for e in exp)
                if len(exp) != nvars or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent {exp} for {nvars} variables")
                clean[exp] = coeff
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @staticmethod
    def zero(nvars: int) -> MultiPoly:
        return MultiPoly(nvars)

    @staticmethod
    def const(nvars: int, c) -> MultiPoly:
        return MultiPoly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def variable(nvars: int, idx: int, coeff=1) -> MultiPoly:
        exp = [0] * nvars
        exp[idx] = 1
        return MultiPoly(nvars, {tuple(exp): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: MultiPoly):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other: MultiPoly) -> MultiPoly:
        self._check(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + coeff
        return MultiPoly(self.nvars, out)

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, out)

    def scale(self, c) -> MultiPoly:
        c = Fraction(c)
        return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.nvars, tuple(sorted(self.terms.items()))))
            )
        return self._hash

    def lead(self) -> tuple[Exponent, Fraction]:
        """Leading term in lex order; errors on the zero polynomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms)
        return exp, self.terms[exp]

    def __call__(self, point: list[Fraction]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point length mismatch")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            value = coeff
            for e, x in zip(exp, point):
                if e:
                    value *= Fraction(x) ** e
            total += value
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            coeff = self.terms[exp]
            factors = [
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exp)
                if e
            ]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {str(self)!r})"


def multipoly_divexact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact division a/b; raises ArithmeticError when b does not divide a.

    Repeatedly cancels lex-leading terms, which terminates exactly when the
    quotient exists (the only case fraction-free elimination produces).
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    a._check(b)
    quotient: dict[Exponent, Fraction] = {}
    lead_b, coeff_b = b.lead()
    rem = a
    while not rem.is_zero():
        lead_r, coeff_r = rem.lead()
        exp = tuple(er - eb for er, eb in zip(lead_r, lead_b))
        if any(e < 0 for e in exp):
            raise ArithmeticError("inexact multivariate division")
        c = coeff_r / coeff_b
        quotient[exp] = quotient.get(exp, Fraction(0)) + c
        rem = rem - b * MultiPoly(a.nvars, {exp: c})
    return MultiPoly(a.nvars, quotient)
