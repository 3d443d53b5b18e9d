"""Exact combinatorial primitives: binomials, symmetric polynomials, permutations, cosets."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence


def binomial(n: int, r: int) -> int:
    """Binomial coefficient, 0 when ``r`` is outside ``[0, n]``."""
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def extended_binomial(h: Sequence[int], p: int | None = None) -> Fraction:
    """Generalized ``C([h], p) = h'_1 (h'_2 - 1) ... (h'_p - p + 1) / p!``.

    ``p! * extended_binomial(h)`` counts the subscripts ``[j] <= [h]`` whose
    entries are pairwise distinct; it vanishes exactly for non-contributing ``h``.
    """
    if p is None:
        p = len(h)
    if len(h) != p:
        raise ValueError(f"subscript {tuple(h)} does not have {p} entries")
    count = 1
    for alpha, value in enumerate(sorted(h)):
        factor = value - alpha
        if factor <= 0:
            return Fraction(0)
        count *= factor
    return Fraction(count, math.factorial(p))


def elementary_symmetric_all(values: Iterable, max_degree: int) -> list:
    """Return ``[e_0, ..., e_max_degree]`` of ``values`` by the one-pass product recurrence.

    Appending ``v`` maps ``e_d -> e_d + v * e_{d-1}``; cost is O(len(values) * max_degree).
    The result has the numeric type of the inputs (int, Fraction, float, ...).
    """
    if max_degree < 0:
        raise ValueError("degree must be non-negative")
    e = [1] + [0] * max_degree
    top = 0
    for v in values:
        top = min(top + 1, max_degree)
        for d in range(top, 0, -1):
            e[d] = e[d] + v * e[d - 1]
    return e


def elementary_symmetric(values: Iterable, degree: int):
    """Sum of all products of ``degree`` distinct entries of ``values`` (1 for degree 0)."""
    return elementary_symmetric_all(values, degree)[degree]


def index_set(elements: Iterable[int]) -> tuple[int, ...]:
    """Canonical sorted, duplicate-free tuple; raises on duplicates."""
    items = tuple(sorted(elements))
    if len(set(items)) != len(items):
        raise ValueError(f"index set has repeated elements: {items}")
    return items


class Permutation(tuple):
    """Bijection on ``{1..c}``; ``pi[m - 1]`` is the image ``pi(m)``."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, c: int) -> "Permutation":
        return cls(range(1, c + 1))

    @classmethod
    def transposition(cls, c: int, x: int, y: int) -> "Permutation":
        images = list(range(1, c + 1))
        images[x - 1], images[y - 1] = y, x
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, m: int) -> int:
        return self[m - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: apply ``other`` first, then ``self``."""
        if len(other) != len(self):
            raise ValueError("degree mismatch")
        return Permutation(self[other[m] - 1] for m in range(len(self)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for m, image in enumerate(self, start=1):
            inv[image - 1] = m
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(image == m for m, image in enumerate(self, start=1))

    def __repr__(self) -> str:
        return f"Permutation({tuple(self)})"


def _check_K(K: Sequence[int], c: int, k: int) -> tuple[int, ...]:
    K = index_set(K)
    if len(K) != k:
        raise ValueError(f"|K| = {len(K)} but k = {k}")
    if K and (K[0] < 1 or K[-1] > c):
        raise ValueError(f"K = {K} not inside 1..{c}")
    return K


def tail_set(c: int, k: int) -> tuple[int, ...]:
    """``Z = {c-k+1, ..., c}``, the positions carrying zero exponents."""
    return tuple(range(c - k + 1, c + 1))


def sigma_K(K: Sequence[int], c: int, k: int) -> Permutation:
    """Transpose the q-th element of ``K \\ Z`` with the q-th element of ``Z \\ K``.

    The result is an involution that exchanges ``K`` and ``Z``; it is the identity when ``K = Z``.
    """
    K = _check_K(K, c, k)
    Z = tail_set(c, k)
    outside = [x for x in K if x not in Z]
    missing = [z for z in Z if z not in K]
    images = list(range(1, c + 1))
    for x, z in zip(outside, missing):
        images[x - 1], images[z - 1] = z, x
    return Permutation(images)


def in_coset(pi: Sequence[int], K: Sequence[int], c: int, k: int) -> bool:
    """Membership test: ``pi`` agrees with ``sigma_K`` on ``Z`` (so ``pi(Z) = K``)."""
    sigma = sigma_K(K, c, k)
    return all(pi[z - 1] == sigma[z - 1] for z in tail_set(c, k))


def coset(K: Sequence[int], c: int, k: int) -> list[Permutation]:
    """The ``(c-k)!`` permutations ``rho o sigma_K`` with ``rho`` fixing ``K`` pointwise.

    Every member sends ``Z`` onto ``K`` exactly as ``sigma_K`` does and maps
    ``I = {1..c-k}`` onto ``C \\ K`` in all possible ways.
    """
    K = _check_K(K, c, k)
    sigma = sigma_K(K, c, k)
    free = [x for x in range(1, c + 1) if x not in K]
    head = c - k
    members = []
    for arrangement in permutations(free):
        images = list(arrangement) + [sigma[z - 1] for z in range(head + 1, c + 1)]
        members.append(Permutation(images))
    return members


def all_permutations(c: int) -> list[Permutation]:
    return [Permutation(images) for images in permutations(range(1, c + 1))]
