import math
import random
from decimal import Decimal, getcontext
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conekit.conespace import (
    EVENTUALLY_FALSE,
    EVENTUALLY_TRUE,
    ConePoint,
    ExpTerm,
    SeqSpec,
    distance_sq,
    exp_condition_check,
    exp_entries_from_json,
    load_seqspec,
    norm_log_eval,
    point_from_sequence,
    relation_Rq,
    same_point,
    seqspec_from_json,
    seqspec_to_json,
)
from conekit.errors import DomainError, InadmissibleSequence, NotPositiveDefinite, ParseError
from conekit.exactlinalg import SymMatrixK
from conekit.hahnfield import ONE, HahnNumber, compare, parse_hahn

from gen import EXPONENTS, rand_sum_zero_exponents, rand_unit_det

P = parse_hahn


def diag_point(exps, coeffs=None):
    coeffs = coeffs or [1] * len(exps)
    return ConePoint.diagonal([HahnNumber.monomial(c, e) for c, e in zip(coeffs, exps)])


class TestExpCheck:
    def test_exponential(self):
        check = exp_condition_check(SeqSpec([[(1, 2)]]))
        assert check.admissible and check.k == 3

    def test_constant(self):
        assert exp_condition_check(SeqSpec([[(5, 0)]])).k == 2

    def test_superexponential(self):
        check = exp_condition_check([[ExpTerm(Fraction(1), (0, 0, 1))]])
        assert not check.admissible

    def test_eventually_negative(self):
        entries = [[ExpTerm(Fraction(1), (0, 1)), ExpTerm(Fraction(-1), (0, 2))]]
        assert not exp_condition_check(entries).admissible

    @pytest.mark.parametrize("c,q", [(1, 2), (5, 0), (Fraction(1, 3), -1), (7, Fraction(5, 2))])
    def test_witness_bounds_single_terms(self, c, q):
        k = exp_condition_check(SeqSpec([[(c, q)]])).k
        for n in range(1, 60):
            # log a(n) = log c + q n must lie strictly inside (-k n, k n)
            log_a = math.log(c) + float(q) * n
            assert -k * n < log_a < k * n

    def test_witness_bounds_sums_eventually(self):
        seq = SeqSpec([[(3, 1), (-2, Fraction(1, 2)), (1, -1)]])
        k = exp_condition_check(seq).k
        for n in range(5, 60):
            (a,) = seq.evaluate(n)
            assert Decimal(-k * n).exp() < a < Decimal(k * n).exp()


class TestPointFromSequence:
    def test_two_by_two(self):
        pt = point_from_sequence(SeqSpec([[(1, 2)], [(1, -2)]]))
        assert pt.rep.diagonal_entries() == (P("r^(-2)"), P("r^2"))

    def test_identity(self):
        assert point_from_sequence(SeqSpec.identity(3)).rep == SymMatrixK.identity(3)

    def test_termwise(self):
        pt = point_from_sequence(SeqSpec([[(1, 1), (1, 0)], [(1, -1)]]))
        assert pt.rep.diagonal_entries()[0] == P("r^(-1) + 1")

    def test_unbalanced_det(self):
        with pytest.raises(InadmissibleSequence):
            point_from_sequence(SeqSpec([[(1, 1)], [(1, 0)]]))

    def test_bad_entries(self):
        with pytest.raises(InadmissibleSequence):
            SeqSpec([[(-1, 1), (5, 0)]])
        with pytest.raises(InadmissibleSequence):
            SeqSpec([[(1, 1), (-1, 1)]])

    @pytest.mark.parametrize("seed", range(10))
    def test_order_matches_eventual_order(self, seed):
        rng = random.Random(seed)
        terms = lambda: [(rng.randint(1, 4), rng.choice(EXPONENTS))] + (
            [(rng.randint(-4, 4) or 1, rng.choice(EXPONENTS))] if rng.random() < 0.5 else [])
        while True:
            try:
                a, b = SeqSpec([terms()]), SeqSpec([terms()])
                break
            except InadmissibleSequence:
                continue
        ka = HahnNumber.from_terms((t.c, -t.q) for t in a.diag[0])
        kb = HahnNumber.from_terms((t.c, -t.q) for t in b.diag[0])
        getcontext().prec = 200
        (x,), (y,) = a.evaluate(300), b.evaluate(300)
        want = (x > y) - (x < y)
        assert int(compare(ka, kb)) == want


class TestDistance:
    def test_zero(self):
        assert distance_sq(ConePoint.base(2), ConePoint.base(2)).value == 0

    def test_diagonal(self):
        assert distance_sq(ConePoint.base(3), diag_point([-1, 0, 1])).value == 2

    def test_sheared(self):
        g = [[ONE, ONE], [HahnNumber(0), ONE]]
        d2 = distance_sq(ConePoint.base(2).act(g), diag_point([-1, 1]).act(g))
        assert d2.value == 2
        assert d2.distance == pytest.approx(math.sqrt(2))

    def test_non_diagonal_representative_of_base(self):
        A = SymMatrixK([[P("1"), P("r")], [P("r"), P("1")]])
        assert same_point(ConePoint(A), ConePoint.base(2))

    def test_requires_unit_det(self):
        with pytest.raises(DomainError):
            ConePoint.diagonal([P("r"), ONE])
        with pytest.raises(NotPositiveDefinite):
            ConePoint.diagonal([-ONE, -ONE])
        with pytest.raises(DomainError):
            distance_sq(ConePoint.base(2), ConePoint.base(3))

    @pytest.mark.parametrize("seed", range(10))
    def test_congruence_invariance(self, seed):
        rng = random.Random(seed)
        m = rng.randint(2, 3)
        D = diag_point(rand_sum_zero_exponents(rng, m), [rng.randint(1, 3) for _ in range(m)])
        g = rand_unit_det(rng, m)
        want = distance_sq(ConePoint.base(m), D).value
        assert distance_sq(ConePoint.base(m).act(g), D.act(g)).value == want

    @pytest.mark.parametrize("seed", range(10))
    def test_weyl_invariance(self, seed):
        rng = random.Random(seed)
        m = 3
        a, b = rand_sum_zero_exponents(rng, m), rand_sum_zero_exponents(rng, m)
        d = distance_sq(diag_point(a), diag_point(b)).value
        for perm in permutations(range(m)):
            assert distance_sq(diag_point([a[i] for i in perm]), diag_point([b[i] for i in perm])).value == d

    @pytest.mark.parametrize("seed", range(10))
    def test_metric_axioms(self, seed):
        rng = random.Random(seed)
        m = 3
        pts = []
        for _ in range(3):
            pt = diag_point(rand_sum_zero_exponents(rng, m))
            if rng.random() < 0.5:
                pt = pt.act(rand_unit_det(rng, m))
            pts.append(pt)
        a, b, c = pts
        dab, dba = distance_sq(a, b).value, distance_sq(b, a).value
        assert dab == dba >= 0
        assert distance_sq(a, a).value == 0
        ab, bc, ac = (math.sqrt(distance_sq(x, y).value) for x, y in ((a, b), (b, c), (a, c)))
        assert ac <= ab + bc + 1e-9


class TestSamePoint:
    def test_unit_perturbation(self):
        x = P("1 + r")
        assert same_point(ConePoint.diagonal([x, 1 / x]), ConePoint.base(2))
        assert ConePoint.diagonal([x, 1 / x]) == ConePoint.base(2)

    def test_distinct(self):
        assert not same_point(diag_point([1, -1]), ConePoint.base(2))

    @pytest.mark.parametrize("seed", range(5))
    def test_equivalence(self, seed):
        rng = random.Random(seed)
        exps = rand_sum_zero_exponents(rng, 3)
        variants = [
            diag_point(exps, [rng.randint(1, 5) for _ in range(3)]) for _ in range(3)
        ] + [diag_point(rand_sum_zero_exponents(rng, 3))]
        for p in variants:
            assert same_point(p, p)
            for q in variants:
                assert same_point(p, q) == same_point(q, p)
                for s in variants:
                    if same_point(p, q) and same_point(q, s):
                        assert same_point(p, s)


class TestNorm:
    def test_unit(self):
        assert norm_log_eval(ConePoint.base(2), [1, 0]) == 0

    def test_scaled(self):
        assert norm_log_eval(SymMatrixK.diagonal([P("r^2"), ONE]), [1, 0]) == -1

    def test_mixed_vector(self):
        assert norm_log_eval(ConePoint.base(2), [P("r"), ONE]) == 0

    def test_triangle_of_ultrametric(self):
        A = diag_point([-2, 1, 1])
        e1, e2 = [1, 0, 0], [0, 1, 0]
        both = [1, 1, 0]
        assert norm_log_eval(A, both) == max(norm_log_eval(A, e1), norm_log_eval(A, e2))

    def test_zero_vector(self):
        with pytest.raises(DomainError):
            norm_log_eval(ConePoint.base(2), [0, 0])


def rq_oracle(A, B, q, n=400):
    """Evaluate d(A_n, B_n)^2 - (q n)^2 numerically at a large n."""
    getcontext().prec = 250
    a, b = A.evaluate(n), B.evaluate(n)
    d2 = sum((x.ln() - y.ln()) ** 2 for x, y in zip(a, b))
    qn = Decimal(q.numerator) / Decimal(q.denominator) * n
    return EVENTUALLY_TRUE if d2 <= qn * qn else EVENTUALLY_FALSE


class TestRq:
    def test_examples(self):
        A = SeqSpec.single([1, 1], [1, -1])
        I = SeqSpec.identity(2)
        assert relation_Rq(A, I, Fraction(3, 2)) == EVENTUALLY_TRUE
        assert relation_Rq(A, I, 1) == EVENTUALLY_FALSE

    def test_first_order_tie(self):
        A = SeqSpec.single([2, 1, 1, Fraction(1, 2)], [1, 1, -1, -1])
        mirror = SeqSpec.single([Fraction(1, 2), 1, 1, 2], [1, 1, -1, -1])
        I = SeqSpec.identity(4)
        assert relation_Rq(A, I, 2) == EVENTUALLY_FALSE
        assert relation_Rq(mirror, I, 2) == EVENTUALLY_TRUE
        assert rq_oracle(A, I, Fraction(2)) == EVENTUALLY_FALSE
        assert rq_oracle(mirror, I, Fraction(2)) == EVENTUALLY_TRUE

    def test_equal_rates_bounded_distance(self):
        A = SeqSpec.single([2, 1, 1, Fraction(1, 2)], [1, 1, -1, -1])
        B = SeqSpec.single([1, 1, 1, 1], [1, 1, -1, -1])
        assert relation_Rq(A, B, 2) == EVENTUALLY_TRUE

    def test_second_order_tie(self):
        # d^2 = n^2 + (log 2)^2 against q = 1: leading and first-order terms tie
        K = SeqSpec.single([3, 1], [0, 0])
        assert relation_Rq(SeqSpec.single([3, 2], [1, 0]), K, 1) == EVENTUALLY_FALSE
        # ratios all 1: distance exactly n
        assert relation_Rq(SeqSpec.single([3, 1], [1, 0]), K, 1) == EVENTUALLY_TRUE

    def test_no_tie(self):
        A = SeqSpec.single([2, 2], [1, -1])
        B = SeqSpec.single([1, 1], [0, 0])
        assert relation_Rq(A, B, 2) == EVENTUALLY_TRUE
        assert relation_Rq(A, B, Fraction(7, 5)) == EVENTUALLY_FALSE

    def test_errors(self):
        A = SeqSpec.identity(2)
        with pytest.raises(DomainError):
            relation_Rq(A, A, 0)
        with pytest.raises(DomainError):
            relation_Rq(A, SeqSpec.identity(3), 1)
        with pytest.raises(DomainError):
            relation_Rq(SeqSpec([[(1, 1), (1, 0)], [(1, -1)]]), A, 1)

    @pytest.mark.parametrize("seed", range(12))
    def test_against_numeric_oracle(self, seed):
        rng = random.Random(seed)
        m = rng.randint(2, 4)
        A = SeqSpec.single([Fraction(rng.randint(1, 4), rng.randint(1, 4)) for _ in range(m)],
                           [Fraction(rng.randint(-4, 4), 2) for _ in range(m)])
        B = SeqSpec.single([Fraction(rng.randint(1, 4), rng.randint(1, 4)) for _ in range(m)],
                           [Fraction(rng.randint(-4, 4), 2) for _ in range(m)])
        lead = sum((a[0].q - b[0].q) ** 2 for a, b in zip(A.diag, B.diag))
        for q in (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)):
            if q * q == lead:
                continue  # ties are decided below order n^2 where n = 400 is unreliable
            assert relation_Rq(A, B, q) == rq_oracle(A, B, q)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 4), st.integers(-6, 6)), min_size=1, max_size=4),
    st.lists(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4), min_size=2, max_size=6),
)
def test_rq_monotone_and_consistent(entries, qs):
    A = SeqSpec.single([c for c, _ in entries], [Fraction(e, 2) for _, e in entries])
    B = SeqSpec.identity(len(entries))
    lead = sum(Fraction(e, 2) ** 2 for _, e in entries)
    results = [(q, relation_Rq(A, B, q)) for q in sorted(set(qs))]
    truth = [r == EVENTUALLY_TRUE for _, r in results]
    assert truth == sorted(truth)
    for q, r in results:
        if q * q > lead:
            assert r == EVENTUALLY_TRUE
        elif q * q < lead:
            assert r == EVENTUALLY_FALSE


class TestJSON:
    def test_round_trip(self, tmp_path):
        seq = SeqSpec([[(2, 1), (1, 0)], [(Fraction(1, 2), -1)]])
        assert seqspec_from_json(seqspec_to_json(seq)) == seq
        path = tmp_path / "s.json"
        path.write_text('{"m": 2, "diag": [[{"c": "1", "q": "1"}], [{"c": "1", "q": "-1"}]]}')
        assert load_seqspec(path) == SeqSpec.single([1, 1], [1, -1])

    @pytest.mark.parametrize("obj", [
        [], {"diag": 3}, {"m": 3, "diag": [[{"c": "1", "q": "0"}]]}, {"diag": [[]]},
        {"diag": [[{"c": "1"}]]}, {"diag": [[{"c": "x", "q": "0"}]]},
    ])
    def test_bad(self, obj):
        with pytest.raises(ParseError):
            seqspec_from_json(obj)

    def test_exp_entries(self):
        entries = exp_entries_from_json({"diag": [[{"c": "1", "p": ["0", "0", "1"]}]]})
        assert not exp_condition_check(entries).admissible
        entries = exp_entries_from_json({"diag": [[{"c": "5", "q": "0"}]]})
        assert exp_condition_check(entries).k == 2
