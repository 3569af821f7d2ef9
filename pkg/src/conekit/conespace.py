"""Points of the asymptotic cone of P(m, R) modelled over K.

A cone point is an SPD matrix over K whose determinant has valuation 0.
Sequences of diagonal matrices with entries ``sum_j c_j exp(q_j n)`` map to
cone points by ``exp(q n) -> r^(-q)``, since ``r`` stands for the class of
``exp(-n)``.  The cone distance between two points is the Euclidean norm of
the valuations of the generalized eigenvalues of the pencil; only its
square is exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import NamedTuple, Sequence

from .errors import DomainError, InadmissibleSequence, NotPositiveDefinite, ParseError
from .exactlinalg import (
    SymMatrixK,
    congruence_act,
    determinant,
    generalized_charpoly,
    ldlt,
    root_valuations,
)
from .hahnfield import ZERO, HahnNumber, as_hahn

__all__ = [
    "SeqTerm",
    "ExpTerm",
    "SeqSpec",
    "ExpCheck",
    "ConePoint",
    "DistanceSq",
    "Eventually",
    "EVENTUALLY_TRUE",
    "EVENTUALLY_FALSE",
    "exp_condition_check",
    "point_from_sequence",
    "distance_sq",
    "norm_log_eval",
    "relation_Rq",
    "same_point",
    "seqspec_from_json",
    "seqspec_to_json",
    "exp_entries_from_json",
    "load_seqspec",
]


class SeqTerm(NamedTuple):
    """The summand ``c * exp(q n)``."""

    c: Fraction
    q: Fraction


class ExpTerm(NamedTuple):
    """The summand ``c * exp(p(n))``; ``p`` lists polynomial coefficients, constant first."""

    c: Fraction
    p: tuple

    @property
    def degree(self) -> int:
        d = len(self.p) - 1
        while d > 0 and self.p[d] == 0:
            d -= 1
        return max(d, 0)

    def coeff(self, k: int) -> Fraction:
        return self.p[k] if k < len(self.p) else Fraction(0)


@dataclass(frozen=True)
class SeqSpec:
    """A sequence of diagonal matrices, entry ``i`` being ``sum_j c_j exp(q_j n)``."""

    diag: tuple

    def __init__(self, diag):
        entries = []
        for i, entry in enumerate(diag):
            acc: dict = {}
            for c, q in entry:
                q = Fraction(q)
                acc[q] = acc.get(q, 0) + Fraction(c)
            terms = tuple(SeqTerm(c, q) for q, c in sorted(acc.items(), reverse=True) if c)
            if not terms:
                raise InadmissibleSequence(f"diagonal entry {i} is identically zero")
            if terms[0].c <= 0:
                raise InadmissibleSequence(f"diagonal entry {i} is eventually negative")
            entries.append(terms)
        if not entries:
            raise DomainError("sequence must have dimension at least 1")
        object.__setattr__(self, "diag", tuple(entries))

    @property
    def m(self) -> int:
        return len(self.diag)

    @classmethod
    def identity(cls, m: int) -> "SeqSpec":
        return cls([[(1, 0)]] * m)

    @classmethod
    def single(cls, coeffs, rates) -> "SeqSpec":
        """Diagonal entries ``c_i exp(q_i n)``."""
        return cls([[(c, q)] for c, q in zip(coeffs, rates)])

    def is_single_term(self) -> bool:
        return all(len(entry) == 1 for entry in self.diag)

    def evaluate(self, n) -> list:
        """Entries at index ``n`` as Decimals (for inspection and oracles)."""
        n = Decimal(n)
        return [
            sum(Decimal(t.c.numerator) / Decimal(t.c.denominator)
                * (Decimal(t.q.numerator) / Decimal(t.q.denominator) * n).exp()
                for t in entry)
            for entry in self.diag
        ]


@dataclass(frozen=True)
class ExpCheck:
    admissible: bool
    k: int | None = None
    reason: str = ""


def _as_exp_entries(seq) -> list:
    if isinstance(seq, SeqSpec):
        return [[ExpTerm(t.c, (Fraction(0), t.q)) for t in entry] for entry in seq.diag]
    out = []
    for entry in seq:
        acc: dict = {}
        for term in entry:
            if isinstance(term, SeqTerm):
                term = ExpTerm(term.c, (Fraction(0), term.q))
            c, p = Fraction(term[0]), tuple(Fraction(x) for x in term[1])
            while len(p) > 1 and p[-1] == 0:
                p = p[:-1]
            acc[p] = acc.get(p, 0) + c
        out.append([ExpTerm(c, p) for p, c in acc.items() if c])
    return out


def exp_condition_check(seq) -> ExpCheck:
    """Decide the growth bound ``exp(-kn) < a(n) < exp(kn)`` and give a witness ``k``.

    ``seq`` is a SeqSpec or a list of entries, each a list of ExpTerm.  The
    witness is valid for every ``n >= 1`` when each entry has a single term;
    for sums it bounds the entries from the dominant exponential onward.
    """
    entries = _as_exp_entries(seq)
    top_rate = Fraction(0)
    slack = 0.0
    for i, entry in enumerate(entries):
        if not entry:
            return ExpCheck(False, None, f"entry {i} is identically zero")
        for t in entry:
            if t.degree >= 2:
                return ExpCheck(False, None, f"entry {i} grows like exp(n^{t.degree})")
        dom = _dominant_sign(entry)
        if dom <= 0:
            return ExpCheck(False, None, f"entry {i} is not eventually positive")
        top_rate = max(top_rate, max(abs(t.coeff(1)) for t in entry))
        spread = max(abs(math.log(abs(t.c))) + abs(float(t.coeff(0))) for t in entry)
        slack = max(slack, math.log(len(entry)) + spread)
    if slack == 0:
        k = math.floor(top_rate) + 1
    else:
        k = math.floor(float(top_rate) + slack) + 1
    return ExpCheck(True, max(k, 1))


def _dominant_sign(entry) -> int:
    groups: dict = {}
    for t in entry:
        groups.setdefault(t.coeff(1), []).append(t)
    for rate in sorted(groups, reverse=True):
        terms = groups[rate]
        if all(t.coeff(0) == 0 for t in terms):
            total = sum(t.c for t in terms)
        else:
            total = sum(float(t.c) * math.exp(float(t.coeff(0))) for t in terms)
        if total:
            return 1 if total > 0 else -1
    return 0


@dataclass(frozen=True)
class DistanceSq:
    """Exact squared cone distance."""

    value: Fraction

    @property
    def distance(self) -> float:
        return math.sqrt(self.value)

    def __str__(self):
        return str(self.value)


class ConePoint:
    """Cone point represented by an SPD matrix over K with ``v(det) = 0``.

    Equality is equality in the cone (zero distance), not of representatives,
    so cone points are unhashable.
    """

    __slots__ = ("rep",)

    def __init__(self, rep):
        if not isinstance(rep, SymMatrixK):
            rep = SymMatrixK(rep)
        if rep.is_diagonal():
            diag = rep.diagonal_entries()
            if any(x.sign() <= 0 for x in diag):
                raise NotPositiveDefinite("cone point representative is not positive definite")
            det_val = sum(x.valuation() for x in diag)
        else:
            ldlt(rep)
            det_val = determinant(rep).valuation()
        if det_val != 0:
            raise DomainError(f"cone point representative has v(det) = {det_val}, expected 0")
        self.rep = rep

    @classmethod
    def base(cls, m: int) -> "ConePoint":
        return cls(SymMatrixK.identity(m))

    @classmethod
    def diagonal(cls, values) -> "ConePoint":
        return cls(SymMatrixK.diagonal(values))

    @property
    def m(self) -> int:
        return self.rep.m

    def act(self, g) -> "ConePoint":
        return ConePoint(congruence_act(g, self.rep))

    def __eq__(self, other):
        if isinstance(other, ConePoint):
            return same_point(self, other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"ConePoint({self.rep!r})"


def point_from_sequence(seq: SeqSpec) -> ConePoint:
    check = exp_condition_check(seq)
    if not check.admissible:
        raise InadmissibleSequence(check.reason)
    values = [HahnNumber.from_terms((t.c, -t.q) for t in entry) for entry in seq.diag]
    det_val = sum(v.valuation() for v in values)
    if det_val != 0:
        raise InadmissibleSequence(f"image has v(det) = {det_val}, expected 0")
    return ConePoint.diagonal(values)


def distance_sq(P: ConePoint, Q: ConePoint) -> DistanceSq:
    if P.m != Q.m:
        raise DomainError("cone points differ in dimension")
    if P.rep.is_diagonal() and Q.rep.is_diagonal():
        return DistanceSq(sum(
            ((a.valuation() - b.valuation()) ** 2
             for a, b in zip(P.rep.diagonal_entries(), Q.rep.diagonal_entries())),
            Fraction(0),
        ))
    vals = root_valuations(generalized_charpoly(P.rep, Q.rep))
    assert sum(vals) == 0, vals
    return DistanceSq(sum((v * v for v in vals), Fraction(0)))


def same_point(P: ConePoint, Q: ConePoint) -> bool:
    return distance_sq(P, Q).value == 0


def norm_log_eval(A, x: Sequence) -> Fraction:
    """``log phi_A(x) = -v(x^T A x) / 2``.

    ``A`` is a ConePoint or any SPD SymMatrixK; the norm does not need the
    determinant normalisation.
    """
    if isinstance(A, ConePoint):
        rep = A.rep
    else:
        rep = A if isinstance(A, SymMatrixK) else SymMatrixK(A)
        ldlt(rep)
    x = [as_hahn(c) for c in x]
    if len(x) != rep.m:
        raise DomainError("vector dimension does not match the cone point")
    if all(c.is_zero() for c in x):
        raise DomainError("norm of the zero vector")
    form = ZERO
    for i, xi in enumerate(x):
        if xi.is_zero():
            continue
        for j, xj in enumerate(x):
            if xj and rep.entries[i][j]:
                form = form + xi * rep.entries[i][j] * xj
    return -form.valuation() / 2


class Eventually(Enum):
    TRUE = "EVENTUALLY_TRUE"
    FALSE = "EVENTUALLY_FALSE"

    def __str__(self):
        return self.value


EVENTUALLY_TRUE, EVENTUALLY_FALSE = Eventually.TRUE, Eventually.FALSE


def relation_Rq(seqA: SeqSpec, seqB: SeqSpec, q) -> Eventually:
    """Decide ``d(A_n, B_n) <= q n`` for all large ``n`` on single-term sequences.

    With ``a_i = c_i exp(s_i n)`` against ``b_i = c'_i exp(s'_i n)`` the
    squared distance is ``n^2 sum D_i^2 + 2n sum D_i log t_i + sum (log t_i)^2``
    where ``D_i = s_i - s'_i`` and ``t_i = c_i / c'_i``; the three orders are
    compared in turn, each by exact rational arithmetic.
    """
    q = Fraction(q)
    if q <= 0:
        raise DomainError("R_q needs q > 0")
    if seqA.m != seqB.m:
        raise DomainError("sequences differ in dimension")
    if not (seqA.is_single_term() and seqB.is_single_term()):
        raise DomainError("R_q is only decided for single-term entries")
    deltas = [a[0].q - b[0].q for a, b in zip(seqA.diag, seqB.diag)]
    ratios = [a[0].c / b[0].c for a, b in zip(seqA.diag, seqB.diag)]
    lead = sum((d * d for d in deltas), Fraction(0))
    if lead != q * q:
        return EVENTUALLY_TRUE if lead < q * q else EVENTUALLY_FALSE
    N = lcm(*(d.denominator for d in deltas))
    product = Fraction(1)
    for d, t in zip(deltas, ratios):
        product *= t ** int(d * N)
    if product != 1:
        return EVENTUALLY_FALSE if product > 1 else EVENTUALLY_TRUE
    return EVENTUALLY_TRUE if all(t == 1 for t in ratios) else EVENTUALLY_FALSE


# -- JSON -----------------------------------------------------------------------

def _rational(x) -> Fraction:
    try:
        return Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {x!r}: {exc}") from None


def seqspec_from_json(obj) -> SeqSpec:
    """``{"m": int, "diag": [[{"c": "rational", "q": "rational"}, ...], ...]}``."""
    if not isinstance(obj, dict) or not isinstance(obj.get("diag"), list):
        raise ParseError("sequence JSON must be an object with a 'diag' list")
    diag = obj["diag"]
    if "m" in obj and obj["m"] != len(diag):
        raise ParseError(f"'m' = {obj['m']} but {len(diag)} diagonal entries given")
    entries = []
    for entry in diag:
        if not isinstance(entry, list) or not entry:
            raise ParseError("each diagonal entry must be a nonempty list of terms")
        terms = []
        for t in entry:
            if not isinstance(t, dict) or "c" not in t or "q" not in t:
                raise ParseError(f"term {t!r} needs 'c' and 'q'")
            terms.append((_rational(t["c"]), _rational(t["q"])))
        entries.append(terms)
    return SeqSpec(entries)


def exp_entries_from_json(obj) -> list:
    """Like ``seqspec_from_json`` but terms may give ``"p"``: exponent polynomial in n."""
    if not isinstance(obj, dict) or not isinstance(obj.get("diag"), list):
        raise ParseError("sequence JSON must be an object with a 'diag' list")
    entries = []
    for entry in obj["diag"]:
        if not isinstance(entry, list):
            raise ParseError("each diagonal entry must be a list of terms")
        terms = []
        for t in entry:
            if not isinstance(t, dict) or "c" not in t:
                raise ParseError(f"term {t!r} needs 'c'")
            if "p" in t:
                if not isinstance(t["p"], list):
                    raise ParseError("'p' must be a list of rationals")
                p = tuple(_rational(x) for x in t["p"]) or (Fraction(0),)
            else:
                p = (Fraction(0), _rational(t.get("q", 0)))
            terms.append(ExpTerm(_rational(t["c"]), p))
        entries.append(terms)
    return entries


def seqspec_to_json(seq: SeqSpec) -> dict:
    return {
        "m": seq.m,
        "diag": [[{"c": str(t.c), "q": str(t.q)} for t in entry] for entry in seq.diag],
    }


def _load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None


def load_seqspec(path) -> SeqSpec:
    return seqspec_from_json(_load_json(path))
