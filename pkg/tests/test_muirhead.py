import math
from fractions import Fraction

import pytest

from cusumlab.combinatorics import Permutation, all_permutations, coset
from cusumlab.muirhead import (
    Configuration,
    OddsVector,
    Scenario,
    component_table,
    derivative_identity_check,
    eval_component,
    eval_cusum,
    eval_F,
    is_contributing,
    muirhead_ratio,
    submajorizes,
    weight_product,
)

W = OddsVector.of(("2", "1", "1"))
A = Configuration.general((1, 1, 0), 1, 1)
PLUS = Configuration.plus(3, 1, 1)


def test_weight_product_examples():
    assert weight_product(Permutation.identity(3), (1, 1, 0), W) == 2
    assert weight_product(Permutation.transposition(3, 1, 2), (1, 0, 0), W) == 1
    assert weight_product(Permutation((3, 1, 2)), (0, 0, 0), W) == 1


def test_muirhead_ratio_examples():
    star = A.star_of()
    assert muirhead_ratio(coset((3,), 3, 1), A, star, W) == Fraction(4, 3)
    assert muirhead_ratio(all_permutations(3), A, star, W) == Fraction(10, 8)
    assert muirhead_ratio(all_permutations(3), A, star, OddsVector.ones(3)) == 1


def test_desk_case_F():
    assert eval_F(A, W) == Fraction(1, 6)
    assert eval_F(A.star_of(), W) == 0
    assert eval_F(A, OddsVector.ones(3)) == 0


def test_desk_case_components_at_aplus():
    scn = Scenario(3, 1, 1, (1,))
    values = [eval_component(scn, (1,), (j,), PLUS, W) for j in (1, 2, 3)]
    assert values == [Fraction(1, 3), Fraction(-1, 6), Fraction(-1, 6)]
    assert sum(values) == 0
    assert eval_cusum(scn, (1,), (2,), PLUS, W) == Fraction(1, 6)
    assert eval_cusum(scn, (1,), (3,), PLUS, W) == 0


def test_cusum_at_full_subscript_is_F():
    w = OddsVector.of(("5/2", "2", "3/2", "1"))
    a = Configuration.general((3, 2, 1, 0), 2, 1)
    for sup in ((1,), (2, 3), (1, 2, 3)):
        scn = Scenario(4, 2, 1, sup)
        assert eval_cusum(scn, sup, (4,) * len(sup), a, w) == eval_F(a, w)


def test_repeated_and_noncontributing_subscripts_vanish():
    w = OddsVector.of(("3", "2", "3/2", "1"))
    a = Configuration.general((2, 2, 1, 0), 2, 1)
    scn = Scenario(4, 2, 1, (1, 2, 3))
    table = component_table(scn, a, w)
    assert table.component((2, 2, 1)) == 0
    assert table.cusum((1, 2, 2)) == 0
    assert eval_component(Scenario(4, 2, 1, (1, 2)), (1, 2), (2, 2), a, w) == 0


@pytest.mark.parametrize("h,expected", [((1, 2, 2), False), ((2, 1, 3), True), ((4, 4, 4), True), ((1, 1), False)])
def test_is_contributing(h, expected):
    assert is_contributing(h) is expected


def test_submajorization_examples():
    assert submajorizes((1, 1, 0), (1, 0, 0))
    assert submajorizes(A.star_of(), A.star_of())
    assert not submajorizes((1, 0.5, 0), (1, 1, 0))


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration.general((1, 2, 0), 1, 1)
    with pytest.raises(ValueError):
        Configuration.general((1, 1, 0), 1, 2)
    with pytest.raises(ValueError):
        OddsVector.of(("1", "2"))
    assert OddsVector.of(("3", "2", "1", "1")).lam == 2


def test_derivative_identity():
    scn = Scenario(3, 1, 1, (2,))
    a = Configuration.general((2, 1, 0), 1, 1)
    w = OddsVector((2.0, 1.5, 1.0))
    assert derivative_identity_check(scn, 0, (2,), a, w, 1e-5) < 1e-6
    # log 1 = 0: analytic side vanishes, so does the numeric one
    assert derivative_identity_check(scn, 0, (3,), a, w, 1e-5) < 1e-6


def test_derivative_identity_rejects_large_steps():
    scn = Scenario(3, 1, 1, (2,))
    with pytest.raises(ValueError):
        derivative_identity_check(scn, 0, (2,), Configuration.general((2, 1, 0), 1, 1), W, 1.5)


def test_float_mode_tracks_exact():
    w = OddsVector.of(("9/4", "2", "5/4", "1"))
    a = Configuration.general((3, 1, 1, 0), 1, 1)
    exact = eval_F(a, w)
    approx = eval_F(a, OddsVector(tuple(float(x) for x in w.entries)), "float")
    assert math.isclose(approx, float(exact), rel_tol=1e-12)
