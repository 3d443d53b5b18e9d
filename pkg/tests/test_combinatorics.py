import math
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from cusumlab.combinatorics import (
    Permutation,
    all_permutations,
    binomial,
    coset,
    elementary_symmetric,
    elementary_symmetric_all,
    extended_binomial,
    in_coset,
    sigma_K,
    tail_set,
)


@pytest.mark.parametrize("n,r,expected", [(4, 2, 6), (0, 0, 1), (23, 22, 23), (5, 6, 0), (5, -1, 0)])
def test_binomial_values(n, r, expected):
    assert binomial(n, r) == expected


def test_binomial_matches_factorials():
    for n in range(30):
        for r in range(n + 1):
            assert binomial(n, r) == math.factorial(n) // (math.factorial(r) * math.factorial(n - r))


def test_extended_binomial_single_component():
    assert extended_binomial((2, 1, 3), 3) == Fraction(1, 6)


def test_extended_binomial_counts_distinct_subscripts():
    assert extended_binomial((1, 3), 2) * 2 == 2
    for c in range(2, 7):
        for p in range(1, c + 1):
            assert extended_binomial((c,) * p, p) == binomial(c, p)


def test_elementary_symmetric_small():
    assert elementary_symmetric((2, 1, 1), 2) == 5
    assert elementary_symmetric((7, 3), 0) == 1
    assert elementary_symmetric((1,) * 9, 4) == binomial(9, 4)
    assert elementary_symmetric((1, 2), 3) == 0


def _enumerate_e(values, d):
    return sum(math.prod(t) for t in combinations(values, d))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=10, max_denominator=16), max_size=8))
def test_recurrence_matches_enumeration(values):
    table = elementary_symmetric_all(values, len(values))
    for d in range(len(values) + 1):
        assert table[d] == _enumerate_e(values, d)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 20), max_size=7), st.integers(0, 20))
def test_appending_value_updates_each_degree(values, v):
    before = elementary_symmetric_all(values, len(values) + 1)
    after = elementary_symmetric_all(values + [v], len(values) + 1)
    for d in range(1, len(values) + 2):
        assert after[d] == before[d] + v * before[d - 1]


def test_sigma_identity_when_K_is_tail():
    assert sigma_K((4, 5), 5, 2).is_identity()
    assert tail_set(5, 2) == (4, 5)


def test_sigma_transpositions():
    assert sigma_K((2, 4), 5, 2) == Permutation.transposition(5, 2, 5)
    assert sigma_K((2,), 3, 1) == Permutation.transposition(3, 2, 3)


def test_coset_small_cases():
    members = coset((3,), 3, 1)
    assert sorted(members) == sorted([Permutation.identity(3), Permutation.transposition(3, 1, 2)])
    members = coset((2,), 3, 1)
    assert len(members) == 2 and all(pi(3) == 2 for pi in members)


@pytest.mark.parametrize("c,k", [(4, 1), (5, 2), (5, 3), (6, 2)])
def test_coset_invariants(c, k):
    Z = tail_set(c, k)
    seen = set()
    for K in combinations(range(1, c + 1), k):
        sigma = sigma_K(K, c, k)
        members = coset(K, c, k)
        assert len(members) == math.factorial(c - k)
        for pi in members:
            assert tuple(sorted(pi(z) for z in Z)) == K
            assert all(pi(z) == sigma(z) for z in Z)
            assert in_coset(pi, K, c, k)
            # pi = rho o sigma with rho fixing K pointwise
            rho = pi.compose(sigma.inverse())
            assert all(rho(x) == x for x in K)
        seen.update(members)
    # the cosets are disjoint but do not cover S_c
    assert len(seen) == binomial(c, k) * math.factorial(c - k)


def test_permutation_group_laws():
    perms = all_permutations(4)
    assert len(perms) == 24 and len(set(perms)) == 24
    a, b = perms[7], perms[13]
    assert a.compose(a.inverse()).is_identity()
    assert all(a.compose(b)(m) == a(b(m)) for m in range(1, 5))
    assert sorted(tuple(p) for p in perms) == sorted(permutations(range(1, 5)))


def test_permutation_rejects_bad_images():
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))
