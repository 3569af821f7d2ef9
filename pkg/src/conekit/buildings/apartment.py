"""The standard apartment {x in Q^m : sum x = 0}: walls, sectors and diamonds.

A diamond ``diamond(x, y)`` is the set of points whose every root coordinate
``z_i - z_j`` lies between those of ``x`` and ``y``.  For ``y`` in the
closed ``x``-based sector of a chamber, the diamonds towards a regular
direction of that chamber are nested and exhaust the sector; see
``sector_recovery_check``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import isqrt

from ..errors import DomainError
from ..exactlinalg import rref

_ONE = Fraction(1)


def _point(v) -> tuple:
    v = tuple(Fraction(x) for x in v)
    if sum(v) != 0:
        raise DomainError(f"{v} is not in the standard apartment (sum must be 0)")
    return v


def positive_roots(m: int):
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def root_value(z, ij) -> Fraction:
    i, j = ij
    return z[i] - z[j]


@dataclass(frozen=True)
class Diamond:
    x: tuple
    y: tuple
    intervals: dict = field(compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.x)

    def member(self, z) -> bool:
        z = tuple(Fraction(c) for c in z)
        if len(z) != self.m or sum(z) != 0:
            return False
        return all(lo <= z[i] - z[j] <= hi for (i, j), (lo, hi) in self.intervals.items())

    def vertices(self) -> list:
        """Exact vertices: feasible points where m-1 independent bounds are active."""
        m = self.m
        if m == 1:
            return [self.x]
        planes = []
        for (i, j), (lo, hi) in self.intervals.items():
            for b in {lo, hi}:
                row = [Fraction(0)] * m
                row[i], row[j] = _ONE, -_ONE
                planes.append((row, b))
        found = []
        for combo in combinations(planes, m - 1):
            system = [row + [b] for row, b in combo] + [[_ONE] * m + [Fraction(0)]]
            R, pivots = rref(system, one=_ONE)
            if pivots != list(range(m)):
                continue
            z = tuple(R[k][m] for k in range(m))
            if z not in found and self.member(z):
                found.append(z)
        return sorted(found, reverse=True)

    def contains(self, other: "Diamond") -> bool:
        """Containment of convex polytopes via their vertices."""
        return all(self.member(v) for v in other.vertices())


def diamond(x, y) -> Diamond:
    x, y = _point(x), _point(y)
    if len(x) != len(y):
        raise DomainError("points differ in dimension")
    intervals = {}
    for ij in positive_roots(len(x)):
        a, b = root_value(x, ij), root_value(y, ij)
        intervals[ij] = (min(a, b), max(a, b))
    return Diamond(x, y, intervals)


# -- chambers and sectors --------------------------------------------------------

def _blocks(chamber, m: int) -> list:
    # a permutation (tuple of ints) is the ordered partition into singletons
    blocks = [tuple(b) if isinstance(b, (tuple, list, set, frozenset)) else (b,) for b in chamber]
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(m)):
        raise DomainError(f"chamber {chamber!r} is not an ordered partition of 0..{m - 1}")
    return blocks


def dominant_chamber(m: int) -> tuple:
    return tuple(range(m))


def chamber_roots(chamber, m: int) -> list:
    """Roots ``(i, j)`` with ``z_i - z_j >= 0`` on the chamber, ``i`` ranked above ``j``."""
    blocks = _blocks(chamber, m)
    roots = []
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            roots.extend((i, j) for i in blocks[a] for j in blocks[b])
    return roots


def sector_membership(x, chamber, z) -> bool:
    """``z - x`` lies in the closed Weyl cone of ``chamber``.

    ``chamber`` is an ordering of coordinate indices (largest first) or, for
    a face, an ordered partition whose blocks are forced equal.
    """
    x, z = _point(x), _point(z)
    m = len(x)
    w = [a - b for a, b in zip(z, x)]
    blocks = _blocks(chamber, m)
    for blk in blocks:
        if any(w[i] != w[blk[0]] for i in blk):
            return False
    return all(w[i] >= w[j] for i, j in chamber_roots(blocks, m))


def regular_direction(chamber) -> tuple:
    """The vector with coordinates ``(m-1)/2, (m-3)/2, ...`` along the chamber order."""
    m = len(chamber)
    v = [Fraction(0)] * m
    for rank_, i in enumerate(chamber):
        v[i] = Fraction(m - 1 - 2 * rank_, 2)
    return tuple(v)


def apply_affine_weyl(perm, translation, z) -> tuple:
    """``z -> perm . z + translation``, with ``(perm . z)[perm[i]] = z[i]``."""
    z = _point(z)
    t = _point(translation)
    out = [Fraction(0)] * len(z)
    for i, p in enumerate(perm):
        out[p] = z[i]
    return tuple(a + b for a, b in zip(out, t))


@dataclass
class SectorReport:
    m: int
    radius: Fraction
    direction: tuple
    k_max: int
    interior_sampled: int = 0
    interior_covered: int = 0
    exterior_sampled: int = 0
    exterior_rejected: int = 0
    tip_covered_at: int | None = None
    nested: bool = True
    counterexample: object = None

    @property
    def holds(self) -> bool:
        return (
            self.nested
            and self.tip_covered_at == 0
            and self.interior_covered == self.interior_sampled
            and self.exterior_rejected == self.exterior_sampled
        )

    def summary(self) -> dict:
        return {
            "axiom": "sector-recovery",
            "holds": self.holds,
            "counterexample": None if self.counterexample is None
            else [str(c) for c in self.counterexample],
            "k_max": self.k_max,
            "interior": [self.interior_covered, self.interior_sampled],
            "exterior": [self.exterior_rejected, self.exterior_sampled],
            "nested": self.nested,
        }


def _ceil_sqrt(t: Fraction) -> int:
    k = isqrt(t.numerator // t.denominator)
    while k * k < t:
        k += 1
    return k


def _random_cone_vector(rng, chamber, radius: Fraction) -> tuple:
    m = len(chamber)
    w = [Fraction(0)] * m
    level = Fraction(0)
    for i in reversed(chamber):
        w[i] = level
        level += Fraction(rng.randint(1, 12), rng.randint(1, 12))
    mean = sum(w) / m
    w = [c - mean for c in w]
    norm_sq = sum(c * c for c in w)
    bound = _ceil_sqrt(norm_sq / (radius * radius)) + 1
    scale = Fraction(rng.randint(1, 16), 16 * bound)
    return tuple(c * scale for c in w)


def _random_exterior_vector(rng, chamber, radius: Fraction) -> tuple:
    m = len(chamber)
    lim = max(1, int(radius))
    while True:
        w = [Fraction(rng.randint(-8 * lim, 8 * lim), 8) for _ in range(m)]
        mean = sum(w) / m
        w = tuple(c - mean for c in w)
        if sum(c * c for c in w) <= radius * radius and not sector_membership(
            (0,) * m, chamber, w
        ):
            return w


def sector_recovery_check(x, chamber, radius, direction=None, samples: int = 100,
                          seed: int = 0) -> SectorReport:
    """Check that the diamonds ``diamond(x, x + k v)``, ``k = 0..k_max``, form a
    chain whose union covers the sector near ``x`` and nothing outside it.

    ``k_max = ceil(sqrt(2) * radius / margin)`` where ``margin`` is the least
    chamber root value of ``v``; a sector point at distance ``<= radius`` from
    ``x`` has every root coordinate at most ``sqrt(2) * radius``.
    """
    x = _point(x)
    m = len(x)
    chamber = tuple(chamber)
    roots = chamber_roots(chamber, m)
    v = regular_direction(chamber) if direction is None else _point(direction)
    margin = min(root_value(v, ij) for ij in roots) if roots else Fraction(1)
    if margin <= 0:
        raise DomainError(f"direction {v} is not regular in chamber {chamber}")
    radius = Fraction(radius)
    k_max = _ceil_sqrt(2 * radius * radius / (margin * margin))
    report = SectorReport(m, radius, v, k_max)
    chain = [diamond(x, tuple(a + k * b for a, b in zip(x, v))) for k in range(k_max + 1)]
    report.nested = all(big.contains(small) for small, big in zip(chain, chain[1:]))

    def first_cover(z):
        return next((k for k, D in enumerate(chain) if D.member(z)), None)

    report.tip_covered_at = first_cover(x)
    rng = random.Random(seed)
    for _ in range(samples):
        w = _random_cone_vector(rng, chamber, radius)
        z = tuple(a + b for a, b in zip(x, w))
        report.interior_sampled += 1
        if first_cover(z) is not None:
            report.interior_covered += 1
        elif report.counterexample is None:
            report.counterexample = z
    for _ in range(samples):
        w = _random_exterior_vector(rng, chamber, radius)
        z = tuple(a + b for a, b in zip(x, w))
        report.exterior_sampled += 1
        if first_cover(z) is None:
            report.exterior_rejected += 1
        elif report.counterexample is None:
            report.counterexample = z
    return report
