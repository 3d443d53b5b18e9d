"""Seeded draws of odds vectors and integer-exponent configurations."""

from __future__ import annotations

import random
from fractions import Fraction

from .muirhead import Configuration, OddsVector

STEPS = 64
MAX_NUMERATOR = 256


def rng_for(seed: int, *labels) -> random.Random:
    """Independent deterministic stream per (seed, labels)."""
    return random.Random(":".join(str(x) for x in (seed,) + labels))


def random_odds(c: int, rng: random.Random) -> OddsVector:
    """``w_j = 1 + n_j/64`` with ``n_j`` uniform on ``0..256``, sorted descending."""
    z = sorted((rng.randint(0, MAX_NUMERATOR) for _ in range(c)), reverse=True)
    return OddsVector(tuple(1 + Fraction(n, STEPS) for n in z))


def odds_draws(c: int, n: int, seed: int, *labels) -> list[OddsVector]:
    """``n`` draws for dimension ``c``; draw 0 is always the all-equal vector."""
    if n < 1:
        raise ValueError("need at least one draw")
    rng = rng_for(seed, "odds", c, *labels)
    return [OddsVector.ones(c)] + [random_odds(c, rng) for _ in range(n - 1)]


def random_configuration(c: int, b: int, k: int, rng: random.Random, spread: int = 3) -> Configuration:
    """Integer exponents ``a_1 >= ... >= a_b = r >= ... >= a_{c-k} > 0`` followed by k zeros.

    Any such vector weakly submajorizes ``a*`` and differs from it because the
    middle block is positive.
    """
    r = rng.randint(1, spread)
    head = sorted((rng.randint(r, r + spread) for _ in range(b - 1)), reverse=True)
    middle = sorted((rng.randint(1, r) for _ in range(c - b - k)), reverse=True)
    return Configuration.general(tuple(head) + (r,) + tuple(middle) + (0,) * k, b, k)
