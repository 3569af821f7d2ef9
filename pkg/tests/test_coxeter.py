from math import factorial

import pytest

from conekit.buildings import CoxeterSimplex, coxeter_complex
from conekit.errors import DomainError, ScaleError


def fubini(n):
    # ordered set partitions of an n-set
    a = [1]
    for k in range(1, n + 1):
        a.append(sum(binom(k, j) * a[k - j] for j in range(1, k + 1)))
    return a[n]


def binom(n, k):
    return factorial(n) // (factorial(k) * factorial(n - k))


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_counts(rank):
    cx = coxeter_complex(rank)
    assert len(cx.chambers) == factorial(rank + 1)
    assert len(cx.vertices) == 2 ** (rank + 1) - 2
    # simplices correspond to ordered partitions with at least two blocks
    assert len(cx.simplices) == fubini(rank + 1) - 1


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_thin(rank):
    cx = coxeter_complex(rank)
    assert set(cx.panel_counts().values()) == {2}


def test_rank_one():
    cx = coxeter_complex(1)
    assert sorted(sorted(c.chain[0]) for c in cx.chambers) == [[1], [2]]


def test_hexagon():
    cx = coxeter_complex(2)
    assert len(cx.vertices) == 6
    adj = cx.adjacency()
    assert all(len(v) == 2 for v in adj.values())
    # the chamber graph is one 6-cycle
    start = cx.chambers[0]
    seen, prev, cur = [start], None, start
    while True:
        nxt = next(d for d in adj[cur] if d != prev)
        if nxt == start:
            break
        seen.append(nxt)
        prev, cur = cur, nxt
    assert len(seen) == 6
    assert cx.face_counts() == {0: 6, 1: 6}


@pytest.mark.parametrize("rank", [2, 3])
def test_weyl_simply_transitive(rank):
    cx = coxeter_complex(rank)
    orbit = cx.weyl_orbit()
    assert len(orbit) == len(set(orbit)) == len(cx.chambers)
    assert set(orbit) == set(cx.chambers)


def test_faces():
    cx = coxeter_complex(3)
    c = cx.chambers[0]
    assert len(list(c.faces())) == 7
    assert all(f in set(cx.simplices) for f in c.faces())


def test_invalid_simplices():
    with pytest.raises(DomainError):
        CoxeterSimplex((), 3)
    with pytest.raises(DomainError):
        CoxeterSimplex(({1, 2, 3},), 3)
    with pytest.raises(DomainError):
        CoxeterSimplex(({1, 2}, {1}), 3)


@pytest.mark.parametrize("rank", [0, 6])
def test_scale(rank):
    with pytest.raises(ScaleError):
        coxeter_complex(rank)


def test_rank_five():
    assert len(coxeter_complex(5).chambers) == 720
