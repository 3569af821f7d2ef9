"""Coxeter complex of type A_n as chains of nontrivial subsets of {1, ..., n+1}."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

from ..errors import DomainError, ScaleError

MAX_RANK = 5


@dataclass(frozen=True)
class CoxeterSimplex:
    """Strictly increasing chain of nonempty proper subsets of ``{1, ..., size}``."""

    chain: tuple
    size: int

    def __post_init__(self):
        chain = tuple(frozenset(s) for s in self.chain)
        ground = frozenset(range(1, self.size + 1))
        if not chain:
            raise DomainError("a simplex is a nonempty chain")
        for s in chain:
            if not s or s == ground or not s <= ground:
                raise DomainError(f"{set(s)} is not a nonempty proper subset of {set(ground)}")
        for a, b in zip(chain, chain[1:]):
            if not a < b:
                raise DomainError("chain is not strictly increasing")
        object.__setattr__(self, "chain", chain)

    @property
    def dimension(self) -> int:
        return len(self.chain) - 1

    def faces(self):
        """Nonempty subchains, including the simplex itself."""
        for k in range(1, len(self.chain) + 1):
            for sub in combinations(self.chain, k):
                yield CoxeterSimplex(sub, self.size)

    def act(self, perm) -> "CoxeterSimplex":
        """Image under the permutation ``i -> perm[i - 1]`` of coordinates."""
        return CoxeterSimplex(
            tuple(frozenset(perm[i - 1] for i in s) for s in self.chain), self.size
        )

    def __repr__(self):
        return "CoxeterSimplex(" + " < ".join(
            "{" + ",".join(map(str, sorted(s))) + "}" for s in self.chain
        ) + ")"


class CoxeterComplex:
    """All simplices of the A_n Coxeter complex, with chamber structure."""

    def __init__(self, rank: int):
        if not 1 <= rank <= MAX_RANK:
            raise ScaleError(f"rank {rank} outside the supported range 1..{MAX_RANK}")
        self.rank = rank
        self.size = rank + 1
        ground = tuple(range(1, self.size + 1))
        self.vertices = tuple(
            frozenset(c) for k in range(1, self.size) for c in combinations(ground, k)
        )
        chains: list = []

        def extend(chain):
            chains.append(CoxeterSimplex(chain, self.size))
            top = chain[-1]
            for v in self.vertices:
                if top < v:
                    extend(chain + (v,))

        for v in self.vertices:
            extend((v,))
        self.simplices = tuple(chains)

    @cached_property
    def chambers(self) -> tuple:
        return tuple(s for s in self.simplices if len(s.chain) == self.rank)

    def chamber_of(self, perm) -> CoxeterSimplex:
        """Chamber ``{p1} < {p1, p2} < ...`` read off a permutation of the ground set."""
        return CoxeterSimplex(
            tuple(frozenset(perm[:k]) for k in range(1, self.size)), self.size
        )

    @staticmethod
    def adjacent(c1: CoxeterSimplex, c2: CoxeterSimplex) -> bool:
        """Distinct chambers sharing a panel, i.e. differing in exactly one subset."""
        return sum(a != b for a, b in zip(c1.chain, c2.chain)) == 1

    def adjacency(self) -> dict:
        return {
            c: [d for d in self.chambers if self.adjacent(c, d)] for c in self.chambers
        }

    def panel_counts(self) -> Counter:
        """Number of chambers containing each codimension-one face."""
        counts: Counter = Counter()
        for c in self.chambers:
            for k in range(self.rank):
                counts[c.chain[:k] + c.chain[k + 1:]] += 1
        return counts

    def face_counts(self) -> dict:
        return dict(sorted(Counter(s.dimension for s in self.simplices).items()))

    def weyl_orbit(self) -> list:
        """Images of the fundamental chamber under every coordinate permutation."""
        base = self.chamber_of(tuple(range(1, self.size + 1)))
        return [base.act(p) for p in permutations(range(1, self.size + 1))]


def coxeter_complex(rank: int) -> CoxeterComplex:
    return CoxeterComplex(rank)
