import random
from itertools import permutations

import pytest

from conekit.buildings import Direction, Flag, Frame, common_frame, flag_at_infinity
from conekit.buildings.flags import flag_from_json, flag_to_json, frame_from_json
from conekit.errors import DomainError, ParseError
from conekit.exactlinalg import identity
from conekit.hahnfield import ONE, ZERO, parse_hahn

from gen import rand_flag, rand_unit_det

P = parse_hahn
e = identity(3)


class TestFrame:
    def test_equality_ignores_order_and_scale(self):
        a = Frame([e[0], e[1], e[2]])
        b = Frame([e[2], tuple(P("r") * x for x in e[0]), e[1]])
        assert a == b and hash(a) == hash(b)

    def test_not_basis(self):
        with pytest.raises(DomainError):
            Frame([e[0], e[0], e[1]])
        with pytest.raises(DomainError):
            Frame([e[0], e[1]])


class TestFlag:
    def test_canonical_basis(self):
        f = Flag([[(ONE, P("r"), ZERO)], [(ONE, ZERO, ZERO), (ZERO, ONE, ZERO)]])
        g = Flag([[(P("2"), P("2*r"), ZERO)], [(ONE, P("r"), ZERO), (ZERO, P("5"), ZERO)]])
        assert f == g
        assert f.dims == (1, 2) and f.is_full()

    def test_not_increasing(self):
        with pytest.raises(DomainError):
            Flag([[e[0]], [e[1], e[2]]])
        with pytest.raises(DomainError):
            Flag([[e[0], e[1]], [e[0]]])

    def test_proper(self):
        with pytest.raises(DomainError):
            Flag([[e[0], e[1], e[2]]])


class TestFlagAtInfinity:
    def test_full(self):
        f = flag_at_infinity(Frame.standard(3), Direction((1, 0, -1)))
        assert f == Flag([[e[0]], [e[0], e[1]]])

    def test_tied(self):
        f = flag_at_infinity(Frame.standard(3), Direction((2, 2, -4)))
        assert f == Flag([[e[0], e[1]]])
        assert not f.is_full()

    def test_zero_direction(self):
        with pytest.raises(DomainError):
            Direction((0, 0, 0))
        with pytest.raises(DomainError):
            Direction((1, 0, 0))
        with pytest.raises(ParseError):
            Direction.parse("1,x,-1")

    @pytest.mark.parametrize("seed", range(5))
    def test_equivariant(self, seed):
        rng = random.Random(seed)
        g = rand_unit_det(rng, 3)
        t = (3, -1, -2)
        frame = Frame(g)
        f = flag_at_infinity(frame, Direction(t))
        for perm in permutations(range(3)):
            permuted = Frame([g[i] for i in perm])
            assert flag_at_infinity(permuted, Direction(tuple(t[i] for i in perm))) == f


class TestCommonFrame:
    def test_transverse(self):
        e2 = identity(2)
        fr = common_frame(Flag([[e2[0]]]), Flag([[e2[1]]]))
        assert fr == Frame.standard(2)

    def test_infinitesimal_tilt(self):
        e2 = identity(2)
        tilt = (ONE, P("r"))
        fr = common_frame(Flag([[e2[0]]]), Flag([[tilt]]))
        assert fr == Frame([e2[0], tilt])

    def test_equal_flags(self):
        e2 = identity(2)
        f = Flag([[e2[0]]])
        fr = common_frame(f, f)
        assert fr.adapts(f)

    @pytest.mark.parametrize("seed", range(30))
    def test_adapts_random(self, seed):
        rng = random.Random(seed)
        m = rng.choice([2, 3, 3, 4])
        f1, f2 = rand_flag(rng, m), rand_flag(rng, m)
        fr = common_frame(f1, f2)
        assert fr.adapts(f1) and fr.adapts(f2)

    def test_adapts_is_not_trivial(self):
        f = Flag([[(ONE, ONE, ZERO)]])
        assert not Frame.standard(3).adapts(f)

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            common_frame(Flag([[identity(2)[0]]]), Flag([[e[0]]]))


class TestJSON:
    def test_flag_forms(self):
        a = flag_from_json([["1", "0", "0"], ["0", "1", "0"]])
        b = flag_from_json({"vectors": [["1", "0", "0"], ["0", "1", "0"]], "dims": [1, 2]})
        assert a == b
        c = flag_from_json({"vectors": [["1", "0", "0"], ["0", "1", "0"]], "dims": [2]})
        assert c.dims == (2,)
        assert flag_to_json(c) == {"m": 3, "subspaces": [[["1", "0", "0"], ["0", "1", "0"]]]}

    def test_frame(self):
        assert frame_from_json([["1", "r"], ["0", "1"]]) == Frame([(ONE, P("r")), (ZERO, ONE)])
        with pytest.raises(ParseError):
            frame_from_json([["1", "1"], ["1", "1"]])
        with pytest.raises(ParseError):
            frame_from_json("x")
