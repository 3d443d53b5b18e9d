from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cusumlab.aplus import contributing_subscripts, q_range, rhs_constant
from cusumlab.combinatorics import binomial
from cusumlab.lemmas import (
    avg_decomposition_46,
    check_lemma43_bounds,
    check_stochastic_dominance,
    hypergeometric_pmf,
    lemma41_average,
    lemma43_bound,
    qp_distribution,
    qp_distribution_bruteforce,
    single_index_signs,
    uniform_q_distribution,
)
from cusumlab.muirhead import OddsVector
from cusumlab.sampling import odds_draws

W3 = OddsVector.of(("2", "1", "1"))


def test_lemma41_spot_values():
    assert lemma41_average(4, 2, 1, 2, (1, 3)) == Fraction(3, 2)
    assert lemma41_average(4, 2, 1, 2, (4, 4)) == 1 == rhs_constant(4, 2, 1, 2)


def test_boundary_initial_value():
    c, b, k, h2 = 48, 25, 22, 47
    closed = Fraction(b - 1, h2 - 1) * binomial(c - b, k) + Fraction(h2 - b, h2 - 1) * binomial(c - b - 1, k)
    assert lemma41_average(c, b, k, 2, (1, h2)) == closed == Fraction(287, 23)


def test_lemma41_rejects_noncontributing():
    with pytest.raises(ValueError):
        lemma41_average(4, 2, 1, 2, (1, 1))


def test_qp_distribution_example():
    dist = qp_distribution((1, 3), 2, 4)
    assert dist.pmf == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert dist.survival(1) == Fraction(1, 2)
    assert qp_distribution((4, 4), 2, 4).survival(1) == Fraction(1, 6)


@pytest.mark.parametrize("c", range(3, 9))
def test_unconstrained_model_is_hypergeometric(c):
    for b in range(1, c):
        for p in range(1, c + 1):
            assert qp_distribution((c,) * p, b, c).pmf == {
                q: v for q, v in hypergeometric_pmf(b, p, c).items() if v
            }


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6).flatmap(lambda c: st.tuples(
    st.just(c), st.integers(1, c - 1), st.lists(st.integers(1, c), min_size=1, max_size=min(c, 4)))))
def test_dp_matches_bruteforce_and_uniform(args):
    c, b, h = args
    from cusumlab.muirhead import is_contributing

    if not is_contributing(h):
        return
    dp = qp_distribution(h, b, c).pmf
    assert dp == qp_distribution_bruteforce(h, b, c)
    assert dp == uniform_q_distribution(h, b)


def test_stochastic_dominance_verdicts():
    assert check_stochastic_dominance((1, 3), 2, 4).verdict == "pass"
    same = check_stochastic_dominance((1, 3), 2, 4, reference=(1, 3))
    assert same.verdict == "report" and same.value == 0


def test_single_index_sign_pattern():
    pattern = single_index_signs(3, 1, 1, 1, W3)
    assert pattern.values == (Fraction(1, 3), Fraction(-1, 6), Fraction(-1, 6))
    assert pattern.signs == (1, -1, -1) and pattern.ok


def test_sign_pattern_random_draws():
    for c, b, k in [(4, 2, 1), (5, 2, 2), (5, 3, 1)]:
        lo, hi = q_range(c, b, k, 1)
        for q in range(lo, hi + 1):
            for w in odds_draws(c, 20, 5, "signs", b, k, q)[1:]:
                assert single_index_signs(c, b, k, q, w).ok


def test_lemma43_bounds_examples():
    rec = check_lemma43_bounds(3, 1, 1, 1, W3)
    assert rec.verdict == "pass"
    assert rec.value + lemma43_bound(3, 1, 1, 1) >= Fraction(2, 3)
    ones = OddsVector.ones(5)
    for j in range(1, 6):
        assert check_lemma43_bounds(5, 2, 2, j, ones).verdict == "pass"
    assert lemma43_bound(5, 2, 2, 1) == Fraction(3, 5)
    assert lemma43_bound(5, 2, 2, 4) == Fraction(3, 5) / Fraction(1, 3)


def test_decomposition_identity():
    w = OddsVector.of(("3", "5/2", "2", "1", "1"))
    for q in (0, 1):
        for h in range(1, 6):
            dec = avg_decomposition_46(5, 2, 1, q, h, w)
            assert dec.combined() == dec.overall == dec.rhs == rhs_constant(5, 2, 1, 1)


def test_decomposition_edge_cases():
    ones = OddsVector.ones(5)
    dec = avg_decomposition_46(5, 2, 1, 0, 2, ones)
    assert dec.avg_plus == binomial(3, 1) > dec.rhs
    full = avg_decomposition_46(5, 2, 1, 0, 5, OddsVector.of(("3", "2", "1", "1", "1")))
    assert full.weight_minus == 0 and full.avg_plus == full.rhs
    with pytest.raises(ValueError):
        avg_decomposition_46(5, 2, 1, 0, 2, ones, p=2)


def test_lemma41_strict_margin_small_grid():
    for c in (3, 4, 5):
        for b in range(1, c):
            for k in range(1, c - b):
                for p in range(1, c - k + 1):
                    rhs = rhs_constant(c, b, k, p)
                    for h in contributing_subscripts(p, c - 1):
                        assert lemma41_average(c, b, k, p, h) > rhs
