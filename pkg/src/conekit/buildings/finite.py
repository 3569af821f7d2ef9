"""Flag complexes of GF(q)^m with brute-force verification of the building axioms."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product

from ..errors import ScaleError
from .coxeter import coxeter_complex

SUPPORTED_Q = (2, 3)
SUPPORTED_M = (2, 3)


def _span(vectors, q: int, m: int) -> frozenset:
    out = set()
    for coeffs in product(range(q), repeat=len(vectors)):
        out.add(tuple(sum(c * v[k] for c, v in zip(coeffs, vectors)) % q for k in range(m)))
    return frozenset(out)


def _dim(space: frozenset, q: int) -> int:
    n, d = len(space), 0
    while n > 1:
        n //= q
        d += 1
    return d


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    holds: bool
    counterexample: object = None
    detail: str = ""

    def summary(self) -> dict:
        return {
            "axiom": self.axiom,
            "holds": self.holds,
            "counterexample": None if self.counterexample is None else repr(self.counterexample),
            "detail": self.detail,
        }


class FiniteFlagComplex:
    """Spherical building of GF(q)^m; subspaces are frozensets of their vectors."""

    def __init__(self, q: int, m: int):
        if q not in SUPPORTED_Q or m not in SUPPORTED_M:
            raise ScaleError(f"(q, m) = ({q}, {m}) outside supported q in {SUPPORTED_Q}, m in {SUPPORTED_M}")
        self.q, self.m = q, m
        nonzero = [v for v in product(range(q), repeat=m) if any(v)]
        # projective points: first nonzero coordinate equal to 1
        self.points = tuple(v for v in nonzero if next(c for c in v if c) == 1)
        spaces = {}
        for k in range(1, m):
            for vs in combinations(self.points, k):
                S = _span(vs, q, m)
                if _dim(S, q) == k:
                    spaces[S] = k
        self.subspaces = tuple(sorted(spaces, key=lambda S: (spaces[S], sorted(S))))
        self.dim = spaces

    def span(self, vectors) -> frozenset:
        return _span(list(vectors), self.q, self.m)

    @cached_property
    def chambers(self) -> tuple:
        """Full flags, as tuples of subspaces of dimensions 1, ..., m-1."""
        layers = [[S for S in self.subspaces if self.dim[S] == k] for k in range(1, self.m)]
        flags = [(S,) for S in layers[0]]
        for layer in layers[1:]:
            flags = [f + (T,) for f in flags for T in layer if f[-1] < T]
        return tuple(flags)

    @cached_property
    def simplices(self) -> tuple:
        out = set()
        for c in self.chambers:
            for k in range(1, len(c) + 1):
                out.update(combinations(c, k))
        return tuple(sorted(out, key=lambda s: (len(s), [sorted(S) for S in s])))

    @cached_property
    def apartments(self) -> tuple:
        """Unordered frames: m projective points spanning the whole space."""
        whole = self.q ** self.m
        return tuple(
            frame for frame in combinations(self.points, self.m)
            if len(self.span(frame)) == whole
        )

    def apartment_vertices(self, frame) -> dict:
        """Map each nonempty proper index subset of the frame to its span."""
        return {
            S: self.span([frame[i] for i in S])
            for k in range(1, self.m)
            for S in combinations(range(self.m), k)
        }

    def apartment_chambers(self, frame) -> set:
        out = set()
        for perm in permutations(range(self.m)):
            out.add(tuple(self.span([frame[i] for i in perm[:k]]) for k in range(1, self.m)))
        return out

    def apartment_simplices(self, frame) -> set:
        out = set()
        for c in self.apartment_chambers(frame):
            for k in range(1, len(c) + 1):
                out.update(combinations(c, k))
        return out


def finite_flag_complex(q: int, m: int) -> FiniteFlagComplex:
    return FiniteFlagComplex(q, m)


def _check_b1(cx: FiniteFlagComplex) -> AxiomResult:
    cox = coxeter_complex(cx.m - 1)
    for frame in cx.apartments:
        vmap = cx.apartment_vertices(frame)
        if len(set(vmap.values())) != len(vmap):
            return AxiomResult("B1", False, frame, "frame spans collide")
        for S, T in product(vmap, repeat=2):
            if (set(S) <= set(T)) != (vmap[S] <= vmap[T]):
                return AxiomResult("B1", False, frame, "inclusion not preserved")
        if len(cx.apartment_chambers(frame)) != len(cox.chambers):
            return AxiomResult("B1", False, frame, "chamber count differs from Coxeter complex")
    return AxiomResult(
        "B1", True, detail=f"{len(cx.apartments)} apartments isomorphic to A_{cx.m - 1}"
    )


def _check_b2(cx: FiniteFlagComplex) -> AxiomResult:
    index = {s: 0 for s in cx.simplices}
    for a, frame in enumerate(cx.apartments):
        for s in cx.apartment_simplices(frame):
            index[s] |= 1 << a
    pairs = 0
    for s, t in combinations(cx.simplices, 2):
        pairs += 1
        if not index[s] & index[t]:
            return AxiomResult("B2", False, (s, t), "no common apartment")
    chamber_pairs = len(cx.chambers) * (len(cx.chambers) - 1) // 2
    return AxiomResult(
        "B2", True,
        detail=f"all {pairs} simplex pairs ({chamber_pairs} chamber pairs) share an apartment",
    )


def _check_b3(cx: FiniteFlagComplex, samples: int, seed: int) -> AxiomResult:
    pairs = list(combinations(cx.apartments, 2))
    if len(pairs) > samples:
        pairs = random.Random(seed).sample(pairs, samples)
    for F1, F2 in pairs:
        v1, v2 = cx.apartment_vertices(F1), cx.apartment_vertices(F2)
        common = set(v1.values()) & set(v2.values())
        inverse = {span: S for S, span in v1.items()}
        found = False
        for perm in permutations(range(cx.m)):
            # frame line i of F1 goes to line perm[i] of F2
            if all(
                v2[tuple(sorted(perm[i] for i in inverse[V]))] == V for V in common
            ):
                found = True
                break
        if not found:
            return AxiomResult("B3", False, (F1, F2), "no isomorphism fixes the intersection")
    return AxiomResult("B3", True, detail=f"{len(pairs)} apartment pairs checked")


def _check_thickness(cx: FiniteFlagComplex) -> AxiomResult:
    counts: dict = {}
    for c in cx.chambers:
        for k in range(len(c)):
            panel = c[:k] + c[k + 1:]
            counts[panel] = counts.get(panel, 0) + 1
    bad = [(p, n) for p, n in counts.items() if n != cx.q + 1]
    if bad:
        return AxiomResult("thickness", False, bad[0], f"expected {cx.q + 1} chambers per panel")
    return AxiomResult(
        "thickness", True, detail=f"all {len(counts)} panels lie in exactly {cx.q + 1} chambers"
    )


def check_axioms(cx: FiniteFlagComplex, samples: int = 500, seed: int = 0) -> list:
    """B1, B2 exhaustively, B3 on up to ``samples`` apartment pairs, and panel thickness."""
    return [
        _check_b1(cx),
        _check_b2(cx),
        _check_b3(cx, samples, seed),
        _check_thickness(cx),
    ]
