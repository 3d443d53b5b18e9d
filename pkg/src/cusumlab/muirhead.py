"""Direct-enumeration oracle for F(a), multi-index F-components and multi-cusums.

Everything here sums over explicit permutations, so it is slow but obviously
faithful to the definitions.  Exact rational arithmetic is used whenever all
exponents are integers and all odds are rational; otherwise values are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Sequence

import numpy as np

from .combinatorics import all_permutations, binomial, sigma_K

MAX_DIRECT_C = 8


# --------------------------------------------------------------------------- types


@dataclass(frozen=True)
class OddsVector:
    """Ordered odds ``w_1 >= ... >= w_c >= 1``."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("empty odds vector")
        for x, y in zip(entries, entries[1:]):
            if x < y:
                raise ValueError(f"odds must be non-increasing: {entries}")
        if entries[-1] < 1:
            raise ValueError(f"odds must be >= 1: {entries}")

    @classmethod
    def of(cls, values) -> "OddsVector":
        """Build from ints, Fractions, floats or ``"n/d"`` strings."""
        out = []
        for v in values:
            if isinstance(v, str):
                v = Fraction(v)
            out.append(v)
        return cls(tuple(out))

    @classmethod
    def ones(cls, c: int) -> "OddsVector":
        return cls((Fraction(1),) * c)

    @property
    def c(self) -> int:
        return len(self.entries)

    @property
    def lam(self) -> int:
        """Index of the last entry exceeding 1 (0 when every entry is 1)."""
        last = 0
        for m, value in enumerate(self.entries, start=1):
            if value > 1:
                last = m
        return last

    def is_rational(self) -> bool:
        return all(isinstance(v, Rational) for v in self.entries)

    def __getitem__(self, m: int):
        """One-based access, ``w[m] = w_m``."""
        return self.entries[m - 1]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Configuration:
    """Ordered exponent vector with distinguished ``r = a_b`` and ``k`` declared zeros.

    ``kind`` is ``"general"`` for a proper configuration, ``"star"`` for
    ``a* = (r, ..., r, 0, ..., 0)`` and ``"plus"`` for the limit ``a+`` whose
    middle block has been sent to zero while the declared zero count stays ``k``.
    """

    entries: tuple
    b: int
    k: int
    kind: str = "general"

    def __post_init__(self):
        a = tuple(self.entries)
        object.__setattr__(self, "entries", a)
        c, b, k = len(a), self.b, self.k
        if not 1 <= b < c:
            raise ValueError(f"need 1 <= b < c, got b={b}, c={c}")
        if not 0 <= k <= c - b:
            raise ValueError(f"need 0 <= k <= c-b, got k={k}")
        for x, y in zip(a, a[1:]):
            if x < y:
                raise ValueError(f"exponents must be non-increasing: {a}")
        r = a[b - 1]
        if r <= 0:
            raise ValueError("r = a_b must be positive")
        if self.kind == "general":
            if any(x != 0 for x in a[c - k:]):
                raise ValueError(f"last {k} exponents must be zero: {a}")
            if a[c - k - 1] <= 0:
                raise ValueError(f"exactly {k} zero exponents required: {a}")
        elif self.kind in ("star", "plus"):
            if any(x != r for x in a[:b]) or any(x != 0 for x in a[b:]):
                raise ValueError(f"{self.kind} configuration must be (r,...,r,0,...,0): {a}")
        else:
            raise ValueError(f"unknown configuration kind {self.kind!r}")

    @classmethod
    def general(cls, entries, b: int, k: int) -> "Configuration":
        return cls(tuple(entries), b, k, "general")

    @classmethod
    def star(cls, c: int, b: int, r=1) -> "Configuration":
        return cls((r,) * b + (0,) * (c - b), b, c - b, "star")

    @classmethod
    def plus(cls, c: int, b: int, k: int, r=1) -> "Configuration":
        """The a+ limit: b r's, c-b-k vanishing middle entries, k zeros."""
        return cls((r,) * b + (0,) * (c - b), b, k, "plus")

    @classmethod
    def path(cls, c: int, b: int, k: int, x, r=1) -> "Configuration":
        """``(r, ..., r, x, ..., x, 0, ..., 0)`` used on the stage-one path."""
        return cls((r,) * b + (x,) * (c - b - k) + (0,) * k, b, k, "general")

    @property
    def c(self) -> int:
        return len(self.entries)

    @property
    def r(self):
        return self.entries[self.b - 1]

    def star_of(self) -> "Configuration":
        return Configuration.star(self.c, self.b, self.r)

    def is_integral(self) -> bool:
        return all(_is_integral(x) for x in self.entries)


@dataclass(frozen=True)
class Scenario:
    """A verification instance ``(c, b, k, p)`` with a strictly increasing superscript."""

    c: int
    b: int
    k: int
    superscript: tuple

    def __post_init__(self):
        i = tuple(self.superscript)
        object.__setattr__(self, "superscript", i)
        c, b, k = self.c, self.b, self.k
        if not 1 <= b < c:
            raise ValueError(f"need 1 <= b < c, got b={b}, c={c}")
        if not 1 <= k <= c - b - 1:
            raise ValueError(f"need 1 <= k <= c-b-1, got k={k} (c={c}, b={b})")
        if not 1 <= len(i) <= c - k:
            raise ValueError(f"need 1 <= p <= c-k, got p={len(i)}")
        if any(x >= y for x, y in zip(i, i[1:])) or i[0] < 1 or i[-1] > c - k:
            raise ValueError(f"superscript must increase strictly within 1..{c - k}: {i}")

    @classmethod
    def representative(cls, c: int, b: int, k: int, p: int, q: int) -> "Scenario":
        """Superscript ``(1, ..., q, b+1, ..., b+p-q)``."""
        lo, hi = max(0, b + k + p - c), min(b, p)
        if not lo <= q <= hi:
            raise ValueError(f"q={q} outside [{lo}, {hi}] for c={c}, b={b}, k={k}, p={p}")
        return cls(c, b, k, tuple(range(1, q + 1)) + tuple(range(b + 1, b + p - q + 1)))

    @classmethod
    def full(cls, c: int, b: int, k: int) -> "Scenario":
        """Full superscript ``(1, ..., c-k)``."""
        return cls(c, b, k, tuple(range(1, c - k + 1)))

    @property
    def p(self) -> int:
        return len(self.superscript)

    @property
    def q(self) -> int:
        return sum(1 for i in self.superscript if i <= self.b)

    def key(self) -> tuple:
        return (self.c, self.b, self.k, self.p, self.q, self.superscript)


# --------------------------------------------------------------------------- predicates


def is_contributing(h: Sequence[int]) -> bool:
    """True iff the ascending rearrangement satisfies ``h'_alpha >= alpha``."""
    return all(value >= alpha for alpha, value in enumerate(sorted(h), start=1))


def has_repeats(j: Sequence[int]) -> bool:
    return len(set(j)) != len(j)


def submajorizes(a: Configuration | Sequence, a_star: Configuration | Sequence) -> bool:
    """Weak submajorization from below: every prefix sum of ``a`` dominates that of ``a_star``."""
    x = a.entries if isinstance(a, Configuration) else tuple(a)
    y = a_star.entries if isinstance(a_star, Configuration) else tuple(a_star)
    if len(x) != len(y):
        raise ValueError("length mismatch")
    sx = sy = 0
    for u, v in zip(sorted(x, reverse=True), sorted(y, reverse=True)):
        sx += u
        sy += v
        if sx < sy:
            return False
    return True


# --------------------------------------------------------------------------- scalar helpers


def _is_integral(x) -> bool:
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    return False


def resolve_mode(a: Configuration, w: OddsVector, mode: str | None) -> str:
    if mode is None:
        return "exact" if a.is_integral() and w.is_rational() else "float"
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact":
        if not a.is_integral():
            raise ValueError("exact mode requires integer exponents")
        if not w.is_rational():
            raise ValueError("exact mode requires rational odds")
    return mode


def weight_product(pi: Sequence[int], a: Configuration | Sequence, w: OddsVector, mode: str | None = None):
    """``w_pi^a = w_{pi(1)}^{a_1} ... w_{pi(c)}^{a_c}``; zero exponents contribute 1."""
    exps = a.entries if isinstance(a, Configuration) else tuple(a)
    if mode is None:
        mode = "exact" if all(_is_integral(x) for x in exps) and w.is_rational() else "float"
    if mode == "exact":
        out = Fraction(1)
        for m, e in enumerate(exps):
            if e:
                if not _is_integral(e):
                    raise ValueError(f"non-integer exponent {e} in exact mode")
                out *= Fraction(w.entries[pi[m] - 1]) ** int(e)
        return out
    log_sum = 0.0
    for m, e in enumerate(exps):
        if e:
            log_sum += float(e) * math.log(float(w.entries[pi[m] - 1]))
    return math.exp(log_sum)


def muirhead_ratio(perms: Sequence[Sequence[int]], a, a_star, w: OddsVector, mode: str | None = None):
    """Standardized Muirhead ratio ``sum w_pi^a / sum w_pi^{a*}`` over ``perms``."""
    if not perms:
        raise ValueError("empty permutation set")
    num = sum(weight_product(pi, a, w, mode) for pi in perms)
    den = sum(weight_product(pi, a_star, w, mode) for pi in perms)
    return num / den


# --------------------------------------------------------------------------- enumeration core


def _coset_of(pi: Sequence[int], c: int, b: int, k: int, sigmas: dict) -> tuple | None:
    """The K with ``pi`` in the coset of ``sigma_K``, or None (K must avoid B)."""
    K = tuple(sorted(pi[z - 1] for z in range(c - k + 1, c + 1)))
    sigma = sigmas.get(K)
    if sigma is None:
        return None
    if all(pi[z - 1] == sigma[z - 1] for z in range(c - k + 1, c + 1)):
        return K
    return None


def _sigmas(c: int, b: int, k: int) -> dict:
    return {K: sigma_K(K, c, k) for K in combinations(range(b + 1, c + 1), k)}


class ComponentTable:
    """All multi-index F-components for one (superscript, a, w), keyed by subscript tuple.

    Built by a single pass over the symmetric group: every permutation lands in
    at most one coset, and its restricted numerator is credited to the subscript
    ``(pi(i_1), ..., pi(i_p))``.
    """

    def __init__(self, c: int, b: int, k: int, superscript: Sequence[int], a: Configuration, w: OddsVector,
                 mode=None, star: Configuration | None = None):
        if c > MAX_DIRECT_C:
            raise ValueError(f"direct enumeration capped at c <= {MAX_DIRECT_C}; use the a+ engine")
        if a.c != c or w.c != c:
            raise ValueError("dimension mismatch")
        self.c, self.b, self.k = c, b, k
        self.superscript = tuple(superscript)
        self.mode = resolve_mode(a, w, mode)
        if star is None:
            star = a.star_of()
        sigmas = _sigmas(c, b, k)
        zero = Fraction(0) if self.mode == "exact" else 0.0
        coset_num = {K: {} for K in sigmas}
        coset_den = {K: zero for K in sigmas}
        full_num: dict = {}
        full_den = zero
        for pi in all_permutations(c):
            num = weight_product(pi, a, w, self.mode)
            den = weight_product(pi, star, w, self.mode)
            key = tuple(pi[i - 1] for i in self.superscript)
            full_num[key] = full_num.get(key, zero) + num
            full_den += den
            K = _coset_of(pi, c, b, k, sigmas)
            if K is not None:
                bucket = coset_num[K]
                bucket[key] = bucket.get(key, zero) + num
                coset_den[K] += den
        scale = binomial(c - b, k)
        values = {}
        for key, num in full_num.items():
            left = sum((coset_num[K].get(key, zero) / coset_den[K] for K in sigmas), zero)
            values[key] = left - scale * num / full_den
        self.values = values
        self._grid = None

    @property
    def p(self) -> int:
        return len(self.superscript)

    def component(self, j: Sequence[int]):
        j = tuple(j)
        if len(j) != self.p:
            raise ValueError("subscript length differs from superscript length")
        if has_repeats(j):
            return self._zero()
        return self.values.get(j, self._zero())

    def _zero(self):
        return Fraction(0) if self.mode == "exact" else 0.0

    def grid(self) -> np.ndarray:
        """Box cumulative sums: ``grid[h_1-1, ..., h_p-1]`` is the cusum at ``h``."""
        if self._grid is None:
            self._grid = box_cumsum(self.values, self.c, self.p, self._zero())
        return self._grid

    def cusum(self, h: Sequence[int]):
        h = tuple(h)
        if len(h) != self.p or any(not 1 <= x <= self.c for x in h):
            raise ValueError(f"bad cusum subscript {h}")
        return self.grid()[tuple(x - 1 for x in h)]

    def total(self):
        return sum(self.values.values(), self._zero())


def box_cumsum(values: dict, c: int, p: int, zero) -> np.ndarray:
    """Dense object array of box sums over ``[1..c]^p`` from a sparse subscript table."""
    grid = np.empty((c,) * p, dtype=object)
    grid.fill(zero)
    for key, value in values.items():
        grid[tuple(x - 1 for x in key)] = value
    for axis in range(p):
        grid = np.cumsum(grid, axis=axis)
    return grid


def component_table(scn: Scenario, a: Configuration, w: OddsVector, mode=None, star=None) -> ComponentTable:
    if scn.c != a.c or scn.b != a.b:
        raise ValueError("scenario and configuration disagree on (c, b)")
    return ComponentTable(scn.c, scn.b, scn.k, scn.superscript, a, w, mode, star)


# --------------------------------------------------------------------------- public operations


def eval_F(a: Configuration, w: OddsVector, mode=None):
    """``F(a) = sum_K (coset ratio) - C(c-b, k) * (full-group ratio)`` with ``k = a.k``."""
    c, b, k = a.c, a.b, a.k
    if w.c != c:
        raise ValueError("dimension mismatch")
    if c > MAX_DIRECT_C:
        raise ValueError(f"direct enumeration capped at c <= {MAX_DIRECT_C}")
    mode = resolve_mode(a, w, mode)
    star = a.star_of()
    sigmas = _sigmas(c, b, k)
    zero = Fraction(0) if mode == "exact" else 0.0
    num = {K: zero for K in sigmas}
    den = {K: zero for K in sigmas}
    full_num = full_den = zero
    for pi in all_permutations(c):
        x = weight_product(pi, a, w, mode)
        y = weight_product(pi, star, w, mode)
        full_num += x
        full_den += y
        K = _coset_of(pi, c, b, k, sigmas)
        if K is not None:
            num[K] += x
            den[K] += y
    left = sum((num[K] / den[K] for K in sigmas), zero)
    return left - binomial(c - b, k) * full_num / full_den


def eval_component(scn: Scenario, i: Sequence[int], j: Sequence[int], a: Configuration, w: OddsVector, mode=None):
    """Multi-index F-component with superscript ``i`` and subscript ``j``; 0 on repeated subscripts."""
    i, j = tuple(i), tuple(j)
    if len(i) != len(j):
        raise ValueError("superscript and subscript lengths differ")
    if has_repeats(j):
        return Fraction(0) if resolve_mode(a, w, mode) == "exact" else 0.0
    sub = Scenario(scn.c, scn.b, scn.k, i)
    return component_table(sub, a, w, mode).component(j)


def eval_cusum(scn: Scenario, i: Sequence[int], h: Sequence[int], a: Configuration, w: OddsVector, mode=None):
    """Multi-cusum: sum of components over the box ``1 <= j_alpha <= h_alpha``."""
    i, h = tuple(i), tuple(h)
    if len(i) != len(h):
        raise ValueError("superscript and subscript lengths differ")
    sub = Scenario(scn.c, scn.b, scn.k, i)
    return component_table(sub, a, w, mode).cusum(h)


def derivative_identity_check(scn: Scenario, i_pos: int, j: Sequence[int], a: Configuration, w: OddsVector, step: float = 1e-5) -> float:
    """Relative residual between a central difference of ``F_(j)`` in ``a_i`` and ``F_(j) log w_{j_i}``.

    ``i = scn.superscript[i_pos]``.  The standardizing configuration ``a*`` is held
    fixed while ``a_i`` moves, so only the restricted numerators depend on ``a_i``.
    Evaluation is in float mode.
    """
    if a.kind != "general":
        raise ValueError("derivative check needs a general configuration")
    i = scn.superscript[i_pos]
    entries = [float(x) for x in a.entries]
    c = len(entries)
    lo = entries[i] if i < c else 0.0
    hi = entries[i - 2] if i >= 2 else math.inf
    x = entries[i - 1]
    if x + step > hi or x - step < lo or x - step <= 0:
        raise ValueError(f"step {step} breaks the ordering of a around position {i}")
    star = Configuration.star(c, a.b, float(a.r))

    def at(value):
        shifted = list(entries)
        shifted[i - 1] = value
        cfg = Configuration(tuple(shifted), a.b, a.k)
        return component_table(scn, cfg, w, "float", star).component(j)

    centre = at(x)
    fd = (at(x + step) - at(x - step)) / (2 * step)
    analytic = centre * math.log(float(w[j[i_pos]]))
    scale = max(abs(analytic), abs(centre), 1e-300)
    return abs(fd - analytic) / scale
