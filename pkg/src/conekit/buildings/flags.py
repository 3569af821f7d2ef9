"""Frames (apartments) and flags (simplices at infinity) of K^m."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError, ParseError
from ..exactlinalg import identity, in_span, intersect_spans, rank, rref
from ..hahnfield import as_hahn, parse_hahn


def _vector(v) -> tuple:
    return tuple(as_hahn(x) for x in v)


def _normalize_line(v: tuple) -> tuple:
    lead = next(x for x in v if not x.is_zero())
    return tuple(x / lead for x in v)


class Frame:
    """Unordered set of m lines spanning K^m.

    ``vectors`` keeps the given order so that directions can refer to lines
    by position; equality ignores order and scaling of the lines.
    """

    __slots__ = ("vectors", "lines")

    def __init__(self, vectors):
        vectors = tuple(_vector(v) for v in vectors)
        m = len(vectors)
        if m == 0 or any(len(v) != m for v in vectors):
            raise DomainError("a frame of K^m consists of m vectors of length m")
        if rank(vectors) != m:
            raise DomainError("frame vectors are not a basis")
        self.vectors = vectors
        self.lines = frozenset(_normalize_line(v) for v in vectors)

    @property
    def m(self) -> int:
        return len(self.vectors)

    @classmethod
    def standard(cls, m: int) -> "Frame":
        return cls(identity(m))

    def __eq__(self, other):
        if isinstance(other, Frame):
            return self.lines == other.lines
        return NotImplemented

    def __hash__(self):
        return hash(self.lines)

    def __repr__(self):
        return "Frame(" + ", ".join(_fmt_vec(v) for v in self.vectors) + ")"

    def adapts(self, flag: "Flag") -> bool:
        """Every subspace of ``flag`` is spanned by a subset of the frame lines."""
        for basis in flag.subspaces:
            inside = sum(1 for v in self.vectors if in_span(basis, v))
            if inside != len(basis):
                return False
        return True


class Flag:
    """Strictly increasing chain of nonzero proper subspaces, each in RREF."""

    __slots__ = ("m", "subspaces")

    def __init__(self, subspaces, m: int | None = None):
        spaces = []
        for basis in subspaces:
            basis = [_vector(v) for v in basis]
            if m is None and basis:
                m = len(basis[0])
            spaces.append(tuple(rref(basis)[0]))
        if m is None:
            raise DomainError("cannot infer the ambient dimension of an empty flag")
        for S in spaces:
            if any(len(v) != m for v in S):
                raise DomainError("subspace vectors have the wrong length")
            if not 0 < len(S) < m:
                raise DomainError("flag subspaces must be nonzero and proper")
        for S, T in zip(spaces, spaces[1:]):
            if not (len(S) < len(T) and all(in_span(T, v) for v in S)):
                raise DomainError("flag subspaces are not strictly increasing")
        self.m = m
        self.subspaces = tuple(spaces)

    @classmethod
    def from_vectors(cls, vectors, dims=None) -> "Flag":
        """Flag of prefix spans ``<v1> < <v1, v2> < ...`` (optionally only ``dims``)."""
        vectors = [_vector(v) for v in vectors]
        m = len(vectors[0]) if vectors else None
        if dims is None:
            dims = [k for k in range(1, len(vectors) + 1) if m is None or k < m]
        return cls([vectors[:k] for k in dims], m)

    @property
    def dims(self) -> tuple:
        return tuple(len(S) for S in self.subspaces)

    def is_full(self) -> bool:
        return self.dims == tuple(range(1, self.m))

    def __eq__(self, other):
        if isinstance(other, Flag):
            return self.m == other.m and self.subspaces == other.subspaces
        return NotImplemented

    def __hash__(self):
        return hash(self.subspaces)

    def __repr__(self):
        return "Flag(" + " < ".join(
            "<" + ", ".join(_fmt_vec(v) for v in S) + ">" for S in self.subspaces
        ) + ")"


@dataclass(frozen=True)
class Direction:
    """Nonzero rational vector with coordinate sum zero."""

    t: tuple

    def __post_init__(self):
        t = tuple(Fraction(x) for x in self.t)
        if sum(t) != 0:
            raise DomainError(f"direction {t} does not sum to zero")
        if all(x == 0 for x in t):
            raise DomainError("direction is zero")
        object.__setattr__(self, "t", t)

    @classmethod
    def parse(cls, text: str) -> "Direction":
        try:
            return cls(tuple(Fraction(x.strip()) for x in text.split(",")))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad direction {text!r}: {exc}") from None


def flag_at_infinity(frame: Frame, direction) -> Flag:
    """Flag of the sector class in the apartment of ``frame`` pointing along ``direction``.

    The k-th subspace is spanned by the lines whose coordinate lies among the
    k largest distinct values; ties give a partial flag.
    """
    if not isinstance(direction, Direction):
        direction = Direction(tuple(direction))
    t = direction.t
    if len(t) != frame.m:
        raise DomainError("direction length does not match the frame")
    levels = sorted(set(t), reverse=True)
    spaces = []
    for k in range(1, len(levels)):
        top = set(levels[:k])
        spaces.append([v for v, ti in zip(frame.vectors, t) if ti in top])
    return Flag(spaces, frame.m)


def _full_chain(flag: Flag) -> list:
    return [()] + list(flag.subspaces) + [identity(flag.m)]


def _extend(base: list, candidates, target_rank: int) -> list:
    chosen = []
    current = list(base)
    r = rank(current) if current else 0
    for v in candidates:
        if r == target_rank:
            break
        trial = current + [v]
        if rank(trial) > r:
            current, r = trial, r + 1
            chosen.append(v)
    return chosen


def common_frame(f1: Flag, f2: Flag) -> Frame:
    """A frame adapted to both flags, so both lie in one apartment.

    For the padded chains ``0 = U_0 < ... < U_a = K^m`` and ``V_0 < ... < V_b``
    each cell ``U_i & V_j`` contributes vectors completing
    ``(U_{i-1} & V_j) + (U_i & V_{j-1})`` inside it.
    """
    if f1.m != f2.m:
        raise DomainError("flags live in different dimensions")
    m = f1.m
    U, V = _full_chain(f1), _full_chain(f2)
    meet = {}
    for i, Ui in enumerate(U):
        for j, Vj in enumerate(V):
            meet[i, j] = intersect_spans(list(Ui), list(Vj), m) if i and j else []
    vectors = []
    for i in range(1, len(U)):
        for j in range(1, len(V)):
            cell = meet[i, j]
            lower = meet[i - 1, j] + meet[i, j - 1]
            vectors.extend(_extend(lower, cell, len(cell)))
    if len(vectors) != m:
        raise AssertionError("common frame construction lost dimension")
    return Frame(vectors)


# -- JSON -----------------------------------------------------------------------

def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _parse_vectors(obj) -> list:
    if not isinstance(obj, list) or not all(isinstance(v, list) for v in obj):
        raise ParseError("expected a JSON array of vectors")
    return [[parse_hahn(str(x)) for x in v] for v in obj]


def frame_from_json(obj) -> Frame:
    """A frame file is a JSON array of m vectors."""
    try:
        return Frame(_parse_vectors(obj))
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def flag_from_json(obj) -> Flag:
    """Either an array of vectors (prefix spans) or ``{"vectors": [...], "dims": [...]}``."""
    try:
        if isinstance(obj, dict):
            return Flag.from_vectors(_parse_vectors(obj.get("vectors")), obj.get("dims"))
        return Flag.from_vectors(_parse_vectors(obj))
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def vectors_to_json(vectors) -> list:
    return [[str(x) for x in v] for v in vectors]


def flag_to_json(flag: Flag) -> dict:
    return {"m": flag.m, "subspaces": [vectors_to_json(S) for S in flag.subspaces]}


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
