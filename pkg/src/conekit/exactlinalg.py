"""Exact linear algebra over K: LDL^T, determinants, pencils, Newton polygons.

The elimination helpers (``determinant``, ``rref``, ``nullspace`` ...) only
use ``+ - * /`` and comparison with ``0``, so they work unchanged on
matrices of ``Fraction`` as well as ``HahnNumber``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, NotPositiveDefinite, ParseError
from .hahnfield import INFINITY, ONE, ZERO, HahnNumber, as_hahn, valuation

__all__ = [
    "SymMatrixK",
    "PolynomialK",
    "NewtonPolygon",
    "ldlt",
    "is_positive_definite",
    "determinant",
    "generalized_charpoly",
    "root_valuations",
    "congruence_act",
    "matmul",
    "transpose",
    "identity",
    "unit_lower_inverse",
    "rref",
    "rank",
    "nullspace",
    "intersect_spans",
    "in_span",
    "load_matrix",
    "dump_matrix",
    "matrix_from_json",
    "matrix_to_json",
]


# -- plain matrices (tuples of rows) ------------------------------------------

def identity(m: int, one=ONE, zero=ZERO):
    return tuple(tuple(one if i == j else zero for j in range(m)) for i in range(m))


def transpose(M):
    return tuple(zip(*M))


def matmul(X, Y):
    Yt = transpose(Y)
    return tuple(
        tuple(_dot(row, col) for col in Yt) for row in X
    )


def _dot(u, v):
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total = total + a * b
    return total


class SymMatrixK:
    """Symmetric m x m matrix over K."""

    __slots__ = ("m", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(as_hahn(x) for x in row) for row in entries)
        m = len(rows)
        if m < 1 or any(len(row) != m for row in rows):
            raise DomainError("matrix must be square and nonempty")
        for i in range(m):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise DomainError(f"matrix not symmetric at ({i}, {j})")
        self.m = m
        self.entries = rows

    @classmethod
    def diagonal(cls, values) -> "SymMatrixK":
        values = [as_hahn(v) for v in values]
        m = len(values)
        return cls([[values[i] if i == j else ZERO for j in range(m)] for i in range(m)])

    @classmethod
    def identity(cls, m: int) -> "SymMatrixK":
        return cls(identity(m))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return self.m

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j].is_zero()
            for i in range(self.m)
            for j in range(self.m)
            if i != j
        )

    def diagonal_entries(self) -> tuple:
        return tuple(self.entries[i][i] for i in range(self.m))

    def __eq__(self, other):
        if isinstance(other, SymMatrixK):
            return self.entries == other.entries
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)
        return f"SymMatrixK([{rows}])"


def _rows(A):
    return A.entries if isinstance(A, SymMatrixK) else tuple(tuple(r) for r in A)


# -- LDL^T and determinants -----------------------------------------------------

def ldlt(A: SymMatrixK, require_pd: bool = True):
    """Return ``(L, d)`` with ``A = L diag(d) L^T`` and ``L`` unit lower triangular.

    Plain sequential pivoting.  A zero pivot always raises; a negative pivot
    raises unless ``require_pd`` is false.
    """
    rows = _rows(A)
    m = len(rows)
    L = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]
    d = []
    for j in range(m):
        pivot = rows[j][j]
        for k in range(j):
            if L[j][k]:
                pivot = pivot - L[j][k] * L[j][k] * d[k]
        if pivot.is_zero() or (require_pd and pivot.sign() < 0):
            raise NotPositiveDefinite(f"pivot {j} is {pivot}, matrix not positive definite")
        d.append(pivot)
        for i in range(j + 1, m):
            s = rows[i][j]
            for k in range(j):
                if L[i][k] and L[j][k]:
                    s = s - L[i][k] * L[j][k] * d[k]
            L[i][j] = s / pivot
    return tuple(tuple(row) for row in L), tuple(d)


def is_positive_definite(A: SymMatrixK) -> bool:
    try:
        ldlt(A)
    except NotPositiveDefinite:
        return False
    return True


def unit_lower_inverse(L):
    """Inverse of a unit lower triangular matrix by forward substitution."""
    m = len(L)
    inv = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(i):
            s = ZERO
            for k in range(j, i):
                if L[i][k] and inv[k][j]:
                    s = s + L[i][k] * inv[k][j]
            inv[i][j] = -s
    return tuple(tuple(row) for row in inv)


def determinant(M):
    """Exact determinant by fraction-free (Bareiss) elimination with row swaps."""
    rows = [list(r) for r in _rows(M)]
    n = len(rows)
    if n == 0:
        return ONE
    if any(len(r) != n for r in rows):
        raise DomainError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return rows[k][k] * 0
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * pivot - rows[i][k] * rows[k][j]) / prev
        prev = pivot
    det = rows[n - 1][n - 1]
    return det if sign > 0 else -det


def congruence_act(g, A: SymMatrixK) -> SymMatrixK:
    """The action ``g . A = g A g^T``."""
    g = _rows(g)
    if len(g) != A.m or any(len(row) != A.m for row in g):
        raise DomainError("g must be square of the same dimension as A")
    return SymMatrixK(matmul(matmul(g, A.entries), transpose(g)))


# -- polynomials over K -------------------------------------------------------

class PolynomialK:
    """Polynomial in one variable with coefficients in K, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        c = [as_hahn(x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, PolynomialK):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = None

    def __mul__(self, other: "PolynomialK") -> "PolynomialK":
        if not self.coeffs or not other.coeffs:
            return PolynomialK([])
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return PolynomialK(out)

    def scale(self, c) -> "PolynomialK":
        c = as_hahn(c)
        return PolynomialK([c * a for a in self.coeffs])

    def __repr__(self):
        return f"PolynomialK({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            power = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not power:
                parts.append(f"({c})")
            elif c == 1:
                parts.append(power)
            else:
                parts.append(f"({c})*{power}")
        return " + ".join(parts)


def _lagrange_basis(nodes: list, k: int) -> list:
    # coefficients (constant first) of prod_{j != k} (x - x_j) / (x_k - x_j)
    poly = [Fraction(1)]
    for j, xj in enumerate(nodes):
        if j == k:
            continue
        scale = Fraction(1, nodes[k] - xj)
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c * scale
            nxt[i] -= c * xj * scale
        poly = nxt
    return poly


def generalized_charpoly(A: SymMatrixK, B: SymMatrixK) -> PolynomialK:
    """``p(x) = det(x A - B)``, computed by exact interpolation at ``x = 0..m``."""
    if A.m != B.m:
        raise DomainError("pencil matrices differ in dimension")
    ldlt(A)
    m = A.m
    nodes = list(range(m + 1))
    values = [
        determinant(
            [[A.entries[i][j] * x - B.entries[i][j] for j in range(m)] for i in range(m)]
        )
        for x in nodes
    ]
    coeffs = [ZERO] * (m + 1)
    for k, fk in enumerate(values):
        if fk.is_zero():
            continue
        for i, c in enumerate(_lagrange_basis(nodes, k)):
            if c:
                coeffs[i] = coeffs[i] + fk * c
    return PolynomialK(coeffs)


# -- Newton polygon -----------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points ``(i, v(c_i))`` of a polynomial.

    ``segments`` holds ``(slope, length)`` pairs from left to right.
    """

    points: tuple
    vertices: tuple
    segments: tuple

    @classmethod
    def of(cls, p: PolynomialK) -> "NewtonPolygon":
        if p.is_zero():
            raise DomainError("Newton polygon of the zero polynomial")
        points = tuple(
            (i, valuation(c)) for i, c in enumerate(p.coeffs) if not c.is_zero()
        )
        hull: list = []
        for pt in points:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
                hull.pop()
            hull.append(pt)
        segments = tuple(
            (Fraction(b[1] - a[1], 1) / (b[0] - a[0]), b[0] - a[0])
            for a, b in zip(hull, hull[1:])
        )
        return cls(points, tuple(hull), segments)

    def root_valuations(self) -> list:
        out = [INFINITY] * self.points[0][0]
        for slope, length in self.segments:
            out.extend([-slope] * length)
        return out


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def root_valuations(p: PolynomialK) -> list:
    """Sorted multiset of root valuations; a zero root counts as INFINITY."""
    return sorted(NewtonPolygon.of(p).root_valuations())


# -- subspaces over a field ---------------------------------------------------

def rref(rows, one=ONE):
    """Reduced row echelon form; returns ``(nonzero rows, pivot columns)``."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = one / M[r][c]
        M[r] = [x * inv if x != 0 else x for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y if y != 0 else x for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(row) for row in M[:r]], pivots


def rank(rows, one=ONE) -> int:
    return len(rref(rows, one)[1])


def nullspace(rows, ncols: int, one=ONE, zero=ZERO) -> list:
    """Basis of ``{x : rows . x = 0}``."""
    R, pivots = rref(rows, one)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def intersect_spans(U, V, ncols: int, one=ONE, zero=ZERO) -> list:
    """Basis (in RREF) of ``span(U) & span(V)`` as the annihilator of the annihilators."""
    if not U or not V:
        return []
    ann = nullspace(U, ncols, one, zero) + nullspace(V, ncols, one, zero)
    if not ann:
        return rref(U, one)[0]
    return rref(nullspace(ann, ncols, one, zero), one)[0]


def in_span(basis, v, one=ONE) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return rank(list(basis) + [tuple(v)], one) == rank(basis, one)


# -- JSON format ---------------------------------------------------------------

def matrix_from_json(obj) -> SymMatrixK:
    """Build a SymMatrixK from ``{"m": int, "entries": [[str, ...], ...]}``."""
    from .hahnfield import parse_hahn

    if not isinstance(obj, dict) or "entries" not in obj:
        raise ParseError("matrix JSON must be an object with 'm' and 'entries'")
    entries = obj["entries"]
    m = obj.get("m", len(entries))
    if not isinstance(m, int) or len(entries) != m or any(
        not isinstance(row, list) or len(row) != m for row in entries
    ):
        raise ParseError(f"matrix entries do not form a {m}x{m} array")
    rows = [[parse_hahn(str(x)) for x in row] for row in entries]
    try:
        return SymMatrixK(rows)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def matrix_to_json(A) -> dict:
    rows = _rows(A)
    return {"m": len(rows), "entries": [[str(x) for x in row] for row in rows]}


def load_matrix(path) -> SymMatrixK:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
    return matrix_from_json(obj)


def dump_matrix(A, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(A), fh, indent=2)
