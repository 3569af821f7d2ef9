"""Exact ordered field K = Frac(Q[r^Q]) with a positive infinitesimal r.

Elements are ratios of finitely supported polynomials in ``r`` with rational
exponents and rational coefficients.  ``r`` is positive and smaller than
every positive rational, so the sign of a nonzero polynomial is the sign of
its lowest-order coefficient, and the valuation of an element is the lowest
exponent of its numerator minus that of its denominator.

Every constructor produces a reduced canonical form: numerator and
denominator are coprime, and the denominator's lowest-order term is ``1``.
"""
from __future__ import annotations

import re
from enum import IntEnum
from fractions import Fraction
from math import gcd, inf, lcm
from typing import Iterable, NamedTuple, Union

from .errors import DomainError, ParseError

__all__ = [
    "HahnTerm",
    "HahnPolynomial",
    "HahnNumber",
    "INFINITY",
    "Ordering",
    "RHO",
    "ZERO",
    "ONE",
    "LESS",
    "EQUAL",
    "GREATER",
    "parse_hahn",
    "add",
    "sub",
    "mul",
    "invert",
    "compare",
    "valuation",
    "leading",
    "as_hahn",
]

INFINITY = inf


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


LESS, EQUAL, GREATER = Ordering.LESS, Ordering.EQUAL, Ordering.GREATER

Rational = Union[int, Fraction]


class HahnTerm(NamedTuple):
    coeff: Fraction
    exponent: Fraction


class HahnPolynomial:
    """Finite sum of terms ``c * r^e`` kept sorted by increasing exponent."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        acc: dict[Fraction, Fraction] = {}
        for c, e in terms:
            e = Fraction(e)
            acc[e] = acc.get(e, 0) + Fraction(c)
        self.terms = tuple(HahnTerm(c, e) for e, c in sorted(acc.items()) if c != 0)

    @classmethod
    def _from_sorted(cls, terms) -> "HahnPolynomial":
        p = cls.__new__(cls)
        p.terms = tuple(terms)
        return p

    @classmethod
    def constant(cls, c) -> "HahnPolynomial":
        c = Fraction(c)
        return cls._from_sorted(() if c == 0 else (HahnTerm(c, Fraction(0)),))

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms[0] == (1, 0)

    def leading(self) -> HahnTerm:
        """Lowest-order term, which dominates because ``r`` is infinitesimal."""
        return self.terms[0]

    def __neg__(self):
        return HahnPolynomial._from_sorted(HahnTerm(-c, e) for c, e in self.terms)

    def __add__(self, other: "HahnPolynomial"):
        if not self.terms:
            return other
        if not other.terms:
            return self
        return HahnPolynomial(self.terms + other.terms)

    def __sub__(self, other: "HahnPolynomial"):
        return self + (-other)

    def __mul__(self, other: "HahnPolynomial"):
        if len(other.terms) == 1:
            c, e = other.terms[0]
            return self.scale(c, e)
        if len(self.terms) == 1:
            c, e = self.terms[0]
            return other.scale(c, e)
        acc: dict[Fraction, Fraction] = {}
        for c1, e1 in self.terms:
            for c2, e2 in other.terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return HahnPolynomial._from_sorted(
            HahnTerm(c, e) for e, c in sorted(acc.items()) if c != 0
        )

    def scale(self, c, e) -> "HahnPolynomial":
        """Multiply by the monomial ``c * r^e``."""
        c, e = Fraction(c), Fraction(e)
        if c == 0:
            return HahnPolynomial()
        return HahnPolynomial._from_sorted(HahnTerm(c * ci, e + ei) for ci, ei in self.terms)

    def __eq__(self, other):
        if isinstance(other, HahnPolynomial):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"HahnPolynomial({_format_poly(self)!r})"

    def __str__(self):
        return _format_poly(self)


# -- reduction in Q[t] with t = r^(1/L) ------------------------------------

def _to_dense(p: HahnPolynomial, shift: Fraction, L: int) -> list:
    deg = int((p.terms[-1].exponent - shift) * L)
    out = [Fraction(0)] * (deg + 1)
    for c, e in p.terms:
        out[int((e - shift) * L)] = c
    return out


def _from_dense(coeffs: list, shift: Fraction, L: int) -> HahnPolynomial:
    return HahnPolynomial._from_sorted(
        HahnTerm(c, shift + Fraction(k, L)) for k, c in enumerate(coeffs) if c != 0
    )


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod_dense(a: list, b: list):
    a = list(a)
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        if c:
            q[k] = c
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    return q, _trim(a[: len(b) - 1])


def _primitive(p: list) -> list:
    """Integer polynomial with coprime coefficients and positive leading term."""
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _gcd_dense(a: list, b: list) -> list:
    # primitive remainder sequence over Z keeps coefficients small
    a, b = _primitive(a), _primitive(b)
    while len(b) > 1:
        a, b = b, _prem(a, b)
        if not b:
            break
        b = _primitive(b)
    if b and len(b) == 1:
        return [Fraction(1)]
    lead = a[-1]
    return [Fraction(c, lead) for c in a]


def _prem(a: list, b: list) -> list:
    a = list(a)
    lb, db = b[-1], len(b) - 1
    while len(a) - 1 >= db and a:
        la, shift = a[-1], len(a) - 1 - db
        a = [c * lb for c in a]
        for i, bi in enumerate(b):
            a[shift + i] -= la * bi
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _reduce(num: HahnPolynomial, den: HahnPolynomial):
    if den.is_zero():
        raise DomainError("zero denominator")
    if num.is_zero():
        return HahnPolynomial(), _ONE_POLY
    if len(den.terms) == 1:
        c, e = den.terms[0]
        return num.scale(1 / c, -e), _ONE_POLY
    L = lcm(*(t.exponent.denominator for t in num.terms + den.terms))
    en, ed = num.terms[0].exponent, den.terms[0].exponent
    P, Q = _to_dense(num, en, L), _to_dense(den, ed, L)
    G = _gcd_dense(P, Q)
    if len(G) > 1:
        P, _ = _divmod_dense(P, G)
        Q, _ = _divmod_dense(Q, G)
    q0 = Q[0]
    P = [c / q0 for c in P]
    Q = [c / q0 for c in Q]
    return _from_dense(P, en - ed, L), _from_dense(Q, Fraction(0), L)


_ONE_POLY = HahnPolynomial.constant(1)


class HahnNumber:
    """Immutable element of K in reduced canonical form."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator=0, denominator=1):
        if not isinstance(numerator, HahnPolynomial):
            numerator = HahnPolynomial.constant(numerator)
        if not isinstance(denominator, HahnPolynomial):
            denominator = HahnPolynomial.constant(denominator)
        self.numerator, self.denominator = _reduce(numerator, denominator)

    @classmethod
    def _make(cls, num, den) -> "HahnNumber":
        # caller guarantees canonical form
        h = cls.__new__(cls)
        h.numerator, h.denominator = num, den
        return h

    @classmethod
    def monomial(cls, coeff, exponent) -> "HahnNumber":
        return cls._make(HahnPolynomial([(coeff, exponent)]), _ONE_POLY)

    @classmethod
    def from_terms(cls, terms) -> "HahnNumber":
        """Polynomial ``sum c * r^e`` from ``(coeff, exponent)`` pairs."""
        return cls._make(HahnPolynomial(terms), _ONE_POLY)

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return self.denominator.is_one()

    def sign(self) -> int:
        if self.numerator.is_zero():
            return 0
        return 1 if self.numerator.terms[0].coeff > 0 else -1

    def valuation(self):
        if self.numerator.is_zero():
            return INFINITY
        return self.numerator.terms[0].exponent

    def leading(self) -> HahnTerm:
        if self.numerator.is_zero():
            raise DomainError("leading term of zero")
        return self.numerator.terms[0]

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return HahnNumber._make(-self.numerator, self.denominator)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.denominator == other.denominator:
            num = self.numerator + other.numerator
            if self.denominator.is_one():
                return HahnNumber._make(num, _ONE_POLY)
            return HahnNumber(num, self.denominator)
        return HahnNumber(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.denominator.is_one() and other.denominator.is_one():
            return HahnNumber._make(self.numerator * other.numerator, _ONE_POLY)
        return HahnNumber(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    __rmul__ = __mul__

    def invert(self) -> "HahnNumber":
        if self.is_zero():
            raise DomainError("division by zero")
        return HahnNumber(self.denominator, self.numerator)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.invert()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order ------------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        # cross-multiplication keeps equality independent of reduction
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        if self.denominator.is_one():
            terms = self.numerator.terms
            if not terms:
                return hash(0)
            if len(terms) == 1 and terms[0].exponent == 0:
                return hash(terms[0].coeff)
        return hash((self.numerator, self.denominator))

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __le__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() >= 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"HahnNumber({str(self)!r})"

    def __str__(self):
        if self.denominator.is_one():
            return _format_poly(self.numerator)
        return f"({_format_poly(self.numerator)})/({_format_poly(self.denominator)})"


def _coerce(x) -> HahnNumber:
    if isinstance(x, HahnNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return HahnNumber._make(HahnPolynomial.constant(x), _ONE_POLY)
    return NotImplemented


def as_hahn(x) -> HahnNumber:
    """Coerce an int, Fraction, string or HahnNumber to a HahnNumber."""
    if isinstance(x, str):
        return parse_hahn(x)
    h = _coerce(x)
    if h is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to HahnNumber")
    return h


ZERO = HahnNumber._make(HahnPolynomial(), _ONE_POLY)
ONE = HahnNumber._make(_ONE_POLY, _ONE_POLY)
RHO = HahnNumber.monomial(1, 1)


# -- formatting -------------------------------------------------------------

def _format_term(c: Fraction, e: Fraction) -> str:
    mag = abs(c)
    if e == 0:
        return str(mag)
    power = "r" if e == 1 else f"r^({e})"
    return power if mag == 1 else f"{mag}*{power}"


def _format_poly(p: HahnPolynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for i, (c, e) in enumerate(p.terms):
        body = _format_term(c, e)
        if i == 0:
            parts.append("-" + body if c < 0 else body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        else:
            ch = m.group(2)
            if ch not in "r+-*/^()":
                raise ParseError(f"unexpected character {ch!r} in {text!r}")
            tokens.append((ch, None))
    return tokens


class _Parser:
    # Accepts a superset of the documented grammar: sums of products of
    # rationals, powers of r and parenthesised groups, evaluated in K.

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        tok = self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r} at token {self.pos} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> HahnNumber:
        if not self.tokens:
            raise ParseError("empty number")
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input at token {self.pos} in {self.text!r}")
        return value

    def expr(self) -> HahnNumber:
        negate = False
        if self.peek() in ("+", "-"):
            negate = self.take()[0] == "-"
        value = self.term()
        if negate:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> HahnNumber:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DomainError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def factor(self) -> HahnNumber:
        kind = self.peek()
        if kind == "int":
            base = HahnNumber(self.take()[1])
            is_rho = False
        elif kind == "r":
            self.take()
            base, is_rho = RHO, True
        elif kind == "(":
            self.take()
            base = self.expr()
            self.take(")")
            is_rho = False
        else:
            raise ParseError(f"unexpected token {kind!r} in {self.text!r}")
        if self.peek() != "^":
            return base
        self.take()
        exponent = self.exponent()
        if is_rho:
            return HahnNumber.monomial(1, exponent)
        if exponent.denominator != 1:
            raise ParseError(f"non-integer power of a non-monomial in {self.text!r}")
        if base.is_zero() and exponent < 0:
            raise DomainError(f"division by zero in {self.text!r}")
        return base ** int(exponent)

    def exponent(self) -> Fraction:
        if self.peek() == "(":
            self.take()
            value = self.signed_rational()
            self.take(")")
            return value
        return self.signed_rational()

    def signed_rational(self) -> Fraction:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        num = self.take("int")[1]
        den = 1
        if self.peek() == "/":
            self.take()
            den = self.take("int")[1]
            if den == 0:
                raise DomainError(f"zero denominator in exponent of {self.text!r}")
        return sign * Fraction(num, den)


def parse_hahn(text: str) -> HahnNumber:
    """Parse text such as ``"3/2*r^(-1) + 1"`` or ``"(1+r)/(1 - r^(1/2))"``."""
    return _Parser(text).parse()


# -- functional surface -------------------------------------------------------

def add(a, b) -> HahnNumber:
    return as_hahn(a) + as_hahn(b)


def sub(a, b) -> HahnNumber:
    return as_hahn(a) - as_hahn(b)


def mul(a, b) -> HahnNumber:
    return as_hahn(a) * as_hahn(b)


def invert(a) -> HahnNumber:
    return as_hahn(a).invert()


def compare(a, b) -> Ordering:
    return Ordering((as_hahn(a) - as_hahn(b)).sign())


def valuation(a):
    """Lowest r-exponent as a Fraction, or INFINITY for zero."""
    return as_hahn(a).valuation()


def leading(a) -> tuple:
    """``(coeff, exponent)`` of the dominant term; DomainError on zero."""
    t = as_hahn(a).leading()
    return t.coeff, t.exponent
