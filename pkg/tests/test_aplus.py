from fractions import Fraction
from itertools import combinations

import pytest

from cusumlab.aplus import (
    AplusInstance,
    CusumGrid,
    avg_cross_product_ratio,
    check_inequality_44,
    component_at_aplus,
    contributing_subscripts,
    cross_product_ratio,
    cusum_at_aplus,
    enumerate_scenarios,
    orderings_count,
    rhs_constant,
    rhs_constant_alt,
    rhs_constant_unsimplified,
    q_range,
    scenarios,
    weighted_average_44,
)
from cusumlab.combinatorics import extended_binomial
from cusumlab.lemmas import lemma41_average
from cusumlab.muirhead import Configuration, OddsVector, Scenario, component_table, is_contributing
from cusumlab.sampling import odds_draws

W3 = OddsVector.of(("2", "1", "1"))


def test_desk_case_engine():
    inst = AplusInstance(3, 1, 1, 1, 1, W3)
    assert [component_at_aplus(inst, (j,)) for j in (1, 2, 3)] == [Fraction(1, 3), Fraction(-1, 6), Fraction(-1, 6)]
    assert cusum_at_aplus(inst, (2,)) == Fraction(1, 6)
    assert cusum_at_aplus(inst, (3,)) == 0


def test_repeats_and_noncontributing_are_zero():
    inst = AplusInstance(5, 2, 1, 3, 2, OddsVector.of(("3", "2", "2", "3/2", "1")))
    assert component_at_aplus(inst, (2, 2, 4)) == 0
    assert cusum_at_aplus(inst, (1, 2, 2)) == 0
    assert cusum_at_aplus(inst, (5, 5, 5)) == 0


@pytest.mark.parametrize("c", [3, 4])
def test_engine_matches_oracle(c):
    for scn in scenarios(c, c):
        a = Configuration.plus(c, scn.b, scn.k)
        for w in odds_draws(c, 3, 11, "t", scn.key()):
            direct = component_table(scn, a, w, "exact")
            grid = CusumGrid(AplusInstance.from_scenario(scn, w))
            for h in contributing_subscripts(scn.p, c):
                assert direct.cusum(h) == grid.cusum(h) == cusum_at_aplus(AplusInstance.from_scenario(scn, w), h)


def test_engine_depends_on_superscript_only_through_q():
    w = OddsVector.of(("3", "5/2", "2", "1", "1"))
    a = Configuration.plus(5, 2, 1)
    ref = component_table(Scenario(5, 2, 1, (1, 3)), a, w, "exact")
    other = component_table(Scenario(5, 2, 1, (2, 4)), a, w, "exact")
    for h in contributing_subscripts(2, 5):
        assert ref.cusum(h) == other.cusum(h)


def test_float_grid_tracks_exact():
    w = OddsVector.of(("7/2", "3", "2", "5/4", "1"))
    exact = CusumGrid(AplusInstance(5, 2, 1, 2, 1, w))
    approx = CusumGrid(AplusInstance(5, 2, 1, 2, 1, OddsVector(tuple(float(x) for x in w.entries))))
    for h in contributing_subscripts(2, 5):
        assert abs(approx.cusum(h) - float(exact.cusum(h))) < 1e-12


def test_cross_product_ratio_example():
    inst = AplusInstance(4, 2, 1, 2, 1, OddsVector.of(("2", "1", "1", "1")))
    assert cross_product_ratio(inst, (1, 3), (4,)) == Fraction(9, 10)
    ones = AplusInstance(4, 2, 1, 2, 1, OddsVector.ones(4))
    assert cross_product_ratio(ones, (1, 3), (4,)) == 1
    assert avg_cross_product_ratio(ones, (1, 3)) == 1


def test_rhs_constant_values_and_forms():
    assert rhs_constant(4, 2, 1, 2) == 1
    assert rhs_constant(48, 25, 22, 2) == Fraction(7475, 1128)
    for c in range(3, 9):
        for b in range(1, c):
            for k in range(1, c - b):
                for p in range(1, c - k + 1):
                    value = rhs_constant(c, b, k, p)
                    assert rhs_constant_alt(c, b, k, p) == value
                    lo, hi = q_range(c, b, k, p)
                    for q in range(lo, hi + 1):
                        assert rhs_constant_unsimplified(c, b, k, p, q) == value


def test_orderings_count():
    assert orderings_count((1, 2), (1, 3)) == 1
    for h in [(2, 3, 4), (1, 4, 4), (3, 3, 2)]:
        total = sum(orderings_count(J, h) for J in combinations(range(1, 5), 3))
        assert total == 6 * extended_binomial(h, 3)
    assert all(orderings_count(J, (5, 5)) == 2 for J in combinations(range(1, 6), 2))


def test_weighted_average_equal_odds_is_lemma41_average():
    for c, b, k, p in [(4, 2, 1, 2), (5, 2, 2, 2), (5, 1, 1, 3)]:
        lo, hi = q_range(c, b, k, p)
        inst = AplusInstance(c, b, k, p, lo, OddsVector.ones(c))
        for h in contributing_subscripts(p, c):
            assert weighted_average_44(inst, h) == lemma41_average(c, b, k, p, h)


def test_weighted_average_equality_case():
    w = OddsVector.of(("3", "2", "3/2", "1", "1"))
    inst = AplusInstance(5, 2, 1, 2, 1, w)
    assert weighted_average_44(inst, (5, 5)) == rhs_constant(5, 2, 1, 2)


def test_inequality_44_sides_agree_with_cusums():
    rec = check_inequality_44(AplusInstance(3, 1, 1, 1, 1, W3), (2,))
    assert rec.verdict == "pass" and rec.value > 0
    for scn in scenarios(5, 4):
        for w in odds_draws(scn.c, 2, 3, scn.key()):
            inst = AplusInstance.from_scenario(scn, w)
            for h in contributing_subscripts(scn.p, scn.c):
                assert check_inequality_44(inst, h).verdict != "fail"


def test_enumerate_scenarios_ranges():
    c3 = {(s.c, s.b, s.k, s.p) for s in scenarios(3)}
    assert c3 == {(3, 1, 1, 1), (3, 1, 1, 2)}
    pairs = list(enumerate_scenarios(5))
    assert all(is_contributing(h) and max(h) <= s.c - 1 for s, h in pairs)
    assert all(s.k < s.c - s.b for s, _ in pairs)
    assert len(pairs) == 1100


def test_instance_validation():
    with pytest.raises(ValueError):
        AplusInstance(4, 2, 2, 1, 0, OddsVector.ones(4))
    with pytest.raises(ValueError):
        AplusInstance(4, 2, 1, 2, 0, OddsVector.ones(4))
