from fractions import Fraction

from cusumlab.muirhead import Configuration, submajorizes
from cusumlab.sampling import odds_draws, random_configuration, rng_for


def test_odds_draws_are_reproducible_and_ordered():
    a = odds_draws(5, 10, 42, "x")
    b = odds_draws(5, 10, 42, "x")
    assert a == b
    assert a[0].entries == (1,) * 5
    for w in a:
        assert list(w.entries) == sorted(w.entries, reverse=True)
        assert all(1 <= x <= 5 and (x * 64).denominator == 1 for x in w.entries)
    assert odds_draws(5, 10, 43, "x") != a


def test_random_configurations_dominate_star():
    rng = rng_for(0, "cfg")
    for c, b, k in [(3, 1, 1), (5, 2, 2), (6, 3, 1)]:
        for _ in range(50):
            a = random_configuration(c, b, k, rng)
            star = Configuration.star(c, b, a.r)
            assert submajorizes(a, star) and a.entries != star.entries
            assert all(isinstance(x, int) for x in a.entries)
            assert a.entries[c - k - 1] > 0 and a.entries[c - k:] == (0,) * k
    assert Fraction(1) in odds_draws(3, 1, 0)[0].entries
