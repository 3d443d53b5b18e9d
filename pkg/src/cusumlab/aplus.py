"""Fast exact evaluation at the a+ limit through elementary symmetric polynomials.

At ``a+`` a multi-index component depends on the superscript only through
``q`` (how many superscript entries are ``<= b``), and every tuplet sum
``sum_{(d) in S} w_(d)`` is the elementary symmetric polynomial ``e_d(w_S)``.
With ``prefactor = p! C(b,q) C(c-b-k,p-q) / C(p,q)``::

    prefactor * F_[j](a+) / (w_j1 ... w_jq)
        = sum_{K in (C\\B)\\J} e_{b-q}(C\\(J u K)) / e_b(C\\K)
          - C(c-b-p+q, k) * e_{b-q}(C\\J) / e_b(C)

Component values are homogeneous of degree 0 in ``w``, so rational odds are
rescaled to integers before any symmetric sums are formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Iterator, Sequence

import numpy as np

from .combinatorics import binomial, elementary_symmetric
from .muirhead import OddsVector, Scenario, has_repeats, is_contributing
from .records import VerificationRecord, scenario_dict


def q_range(c: int, b: int, k: int, p: int) -> tuple[int, int]:
    return max(0, b + k + p - c), min(b, p)


@dataclass(frozen=True)
class AplusInstance:
    c: int
    b: int
    k: int
    p: int
    q: int
    w: OddsVector

    def __post_init__(self):
        c, b, k, p, q = self.c, self.b, self.k, self.p, self.q
        if not 1 <= b <= c - 1:
            raise ValueError(f"need 1 <= b <= c-1, got b={b}, c={c}")
        if not 1 <= k <= c - b - 1:
            raise ValueError(f"need 1 <= k <= c-b-1, got k={k}")
        if not 1 <= p <= c - k:
            raise ValueError(f"need 1 <= p <= c-k, got p={p}")
        lo, hi = q_range(c, b, k, p)
        if not lo <= q <= hi:
            raise ValueError(f"q={q} outside [{lo}, {hi}]")
        if self.w.c != c:
            raise ValueError(f"odds vector has {self.w.c} entries, expected {c}")

    @classmethod
    def from_scenario(cls, scn: Scenario, w: OddsVector) -> "AplusInstance":
        return cls(scn.c, scn.b, scn.k, scn.p, scn.q, w)

    @property
    def scenario(self) -> Scenario:
        return Scenario.representative(self.c, self.b, self.k, self.p, self.q)

    @cached_property
    def exact(self) -> bool:
        return self.w.is_rational()

    @cached_property
    def values(self) -> tuple:
        """Odds rescaled to integers (exact) or converted to float; 0-indexed."""
        if self.exact:
            scale = math.lcm(*(Fraction(v).denominator for v in self.w.entries))
            return tuple(int(Fraction(v) * scale) for v in self.w.entries)
        return tuple(float(v) for v in self.w.entries)

    @cached_property
    def prefactor(self) -> int:
        """``p! C(b,q) C(c-b-k,p-q) / C(p,q) = q! (p-q)! C(b,q) C(c-b-k,p-q)``."""
        c, b, k, p, q = self.c, self.b, self.k, self.p, self.q
        return math.factorial(q) * math.factorial(p - q) * binomial(b, q) * binomial(c - b - k, p - q)

    @cached_property
    def eliminations(self) -> tuple:
        """All ``K subset C\\B`` with ``|K| = k``."""
        return tuple(combinations(range(self.b + 1, self.c + 1), self.k))

    def e(self, excluded, degree: int):
        """``e_degree`` of the (scaled) odds whose 1-based index is not in ``excluded``."""
        excluded = set(excluded)
        return elementary_symmetric((v for m, v in enumerate(self.values, 1) if m not in excluded), degree)

    @cached_property
    def _eb_without(self) -> dict:
        return {K: self.e(K, self.b) for K in self.eliminations}

    @cached_property
    def _eb_all(self):
        return self.e((), self.b)

    def k_J(self, J) -> int:
        q_prime = sum(1 for j in J if j <= self.b)
        return binomial(self.c - self.b - self.p + q_prime, self.k)

    def admissible_K(self, J) -> list:
        J = set(J)
        return [K for K in self.eliminations if not J.intersection(K)]

    def bracket(self, J):
        """``prefactor * F_[j](a+) / w_(q^j)`` in scaled odds; depends only on the set J."""
        J = tuple(sorted(J))
        d = self.b - self.q
        left = sum(self._div(self.e(J + K, d), self._eb_without[K]) for K in self.admissible_K(J))
        right = binomial(self.c - self.b - self.p + self.q, self.k) * self._div(self.e(J, d), self._eb_all)
        return left - right

    def _div(self, x, y):
        return Fraction(x, y) if self.exact else x / y

    def lead_product(self, j: Sequence[int]):
        """``w_(q^j) = w_j1 ... w_jq`` in scaled odds."""
        out = 1
        for x in j[: self.q]:
            out *= self.values[x - 1]
        return out


# --------------------------------------------------------------------------- components and cusums


def _check_len(inst: AplusInstance, j: Sequence[int], what: str) -> tuple:
    j = tuple(j)
    if len(j) != inst.p:
        raise ValueError(f"{what} {j} must have p={inst.p} entries")
    if any(not 1 <= x <= inst.c for x in j):
        raise ValueError(f"{what} {j} has entries outside 1..{inst.c}")
    return j


def component_at_aplus(inst: AplusInstance, j: Sequence[int]):
    """``F_[j]^[i](a+)`` for any superscript with ``q[i] = inst.q``; 0 on repeated subscripts."""
    j = _check_len(inst, j, "subscript")
    if has_repeats(j):
        return Fraction(0) if inst.exact else 0.0
    value = inst.lead_product(j) * inst.bracket(j)
    return value / inst.prefactor


def distinct_below(h: Sequence[int], c: int | None = None) -> Iterator[tuple]:
    """Subscripts ``[j] <= [h]`` (entrywise) with pairwise distinct entries."""
    h = tuple(h)

    def walk(prefix, used):
        alpha = len(prefix)
        if alpha == len(h):
            yield tuple(prefix)
            return
        for x in range(1, h[alpha] + 1):
            if x not in used:
                prefix.append(x)
                used.add(x)
                yield from walk(prefix, used)
                used.discard(x)
                prefix.pop()

    yield from walk([], set())


def cusum_at_aplus(inst: AplusInstance, h: Sequence[int]):
    """``S_[h]^[i](a+)``, summing components over distinct-entry ``[j] <= [h]``."""
    h = _check_len(inst, h, "cusum subscript")
    brackets: dict = {}
    total = 0
    for j in distinct_below(h):
        J = frozenset(j)
        if J not in brackets:
            brackets[J] = inst.bracket(J)
        total += inst.lead_product(j) * brackets[J]
    if inst.exact:
        return Fraction(total) / inst.prefactor
    return float(total) / inst.prefactor


class CusumGrid:
    """Every cusum ``S_[h](a+)`` for ``h in [1..c]^p`` of one instance.

    In exact mode all brackets are put over the common denominator
    ``lcm(e_b(C\\K), e_b(C))`` so that the box cumulative sums run on integers;
    ``numerators[h-1] / denominator`` is the cusum.
    """

    def __init__(self, inst: AplusInstance):
        self.inst = inst
        c, p = inst.c, inst.p
        if inst.exact:
            dens = list(inst._eb_without.values()) + [inst._eb_all]
            common = math.lcm(*dens)
            self.denominator = common * inst.prefactor
        else:
            common = 1
            self.denominator = float(inst.prefactor)
        d = inst.b - inst.q
        scale_right = binomial(c - inst.b - p + inst.q, inst.k)
        grid = np.zeros((c,) * p, dtype=object if inst.exact else float)
        for J in combinations(range(1, c + 1), p):
            left = 0
            for K in inst.admissible_K(J):
                eb = inst._eb_without[K]
                left += inst.e(J + K, d) * (common // eb) if inst.exact else inst.e(J + K, d) / eb
            if inst.exact:
                right = scale_right * inst.e(J, d) * (common // inst._eb_all)
            else:
                right = scale_right * inst.e(J, d) / inst._eb_all
            numer = left - right
            for j in permutations(J):
                grid[tuple(x - 1 for x in j)] = inst.lead_product(j) * numer
        for axis in range(p):
            grid = np.cumsum(grid, axis=axis)
        self.numerators = grid

    def numerator(self, h: Sequence[int]):
        return self.numerators[tuple(x - 1 for x in h)]

    def cusum(self, h: Sequence[int]):
        num = self.numerator(h)
        if self.inst.exact:
            return Fraction(int(num), self.denominator)
        return float(num) / self.denominator

    def sign(self, h: Sequence[int]) -> int:
        num = self.numerator(h)
        return (num > 0) - (num < 0)


# --------------------------------------------------------------------------- cross-product ratios


def cross_product_ratio(inst: AplusInstance, J: Sequence[int], K: Sequence[int]):
    """``R_JK`` of four normalized tuplet sums; depends on ``[j]`` only through the set J."""
    c, b, k, p, q = inst.c, inst.b, inst.k, inst.p, inst.q
    J, K = tuple(sorted(J)), tuple(sorted(K))
    if len(J) != p or len(K) != k:
        raise ValueError(f"need |J| = {p} and |K| = {k}")
    if set(J) & set(K):
        raise ValueError(f"J={J} and K={K} intersect")
    if any(x <= b for x in K):
        raise ValueError(f"K={K} must lie in C\\B")
    d = b - q
    num = inst.e(J + K, d) * inst._eb_all * binomial(c - p, d) * binomial(c - k, b)
    den = inst.e(J, d) * inst._eb_without[K] * binomial(c - k - p, d) * binomial(c, b)
    return inst._div(num, den)


def avg_cross_product_ratio(inst: AplusInstance, J: Sequence[int]):
    """Mean of ``R_JK`` over admissible K (``K subset (C\\B)\\J``, ``|K| = k``)."""
    Ks = inst.admissible_K(J)
    if not Ks:
        raise ValueError(f"no admissible K for J={tuple(J)} (k_J = 0)")
    total = sum(cross_product_ratio(inst, J, K) for K in Ks)
    return total / len(Ks)


def rhs_constant(c: int, b: int, k: int, p: int) -> Fraction:
    """``C(c-b,k) C(c-k,p) / C(c,p)``."""
    return Fraction(binomial(c - b, k) * binomial(c - k, p), binomial(c, p))


def rhs_constant_alt(c: int, b: int, k: int, p: int) -> Fraction:
    """``C(c-k,b) C(c-p,k) / C(c,b)``, the second closed form."""
    return Fraction(binomial(c - k, b) * binomial(c - p, k), binomial(c, b))


def rhs_constant_unsimplified(c: int, b: int, k: int, p: int, q: int) -> Fraction:
    """The threshold before factorial simplification; it does not depend on q."""
    return Fraction(
        binomial(c - b - p + q, k) * binomial(c - p, b - q) * binomial(c - k, b),
        binomial(c - k - p, b - q) * binomial(c, b),
    )


# --------------------------------------------------------------------------- (4.4) weighted average


def orderings_count(J: Sequence[int], h: Sequence[int]) -> int:
    """Number of orderings ``[j]`` of the set J with ``j_alpha <= h_alpha`` for all alpha."""
    if len(J) != len(h):
        raise ValueError("|J| must equal |h|")
    return sum(1 for j in permutations(J) if all(x <= y for x, y in zip(j, h)))


@dataclass(frozen=True)
class SubsetProfile:
    J: tuple
    q_prime: int
    k_J: int
    u_J: object
    f_J: int
    wbar: object


def subset_profile(inst: AplusInstance, J: Sequence[int], h: Sequence[int]) -> SubsetProfile:
    """Per-subset quantities of the weighted average, in the caller's (unscaled) odds."""
    J = tuple(sorted(J))
    valid = [j for j in permutations(J) if all(x <= y for x, y in zip(j, h))]
    f = len(valid)
    w = inst.w
    lead = [math.prod((w[x] for x in j[: inst.q]), start=Fraction(1) if inst.exact else 1.0) for j in valid]
    wbar = sum(lead) / f if f else 0
    u = elementary_symmetric((w[m] for m in range(1, inst.c + 1) if m not in J), inst.b - inst.q)
    return SubsetProfile(J, sum(1 for x in J if x <= inst.b), inst.k_J(J), u, f, wbar)


def weighted_average_44(inst: AplusInstance, h: Sequence[int]):
    """Left side of the positivity criterion: the ``f_J wbar u_J``-weighted mean of ``k_J R_J.``.

    Subsets with ``k_J = 0`` contribute 0 to the numerator.  Returns None when no
    subset carries weight (non-contributing ``h``).
    """
    h = _check_len(inst, h, "cusum subscript")
    num = den = 0
    for J in combinations(range(1, inst.c + 1), inst.p):
        weight = 0
        for j in permutations(J):
            if all(x <= y for x, y in zip(j, h)):
                weight += inst.lead_product(j)
        if not weight:
            continue
        weight *= inst.e(J, inst.b - inst.q)
        den += weight
        Ks = inst.admissible_K(J)
        if Ks:
            num += weight * sum(cross_product_ratio(inst, J, K) for K in Ks)
    if not den:
        return None
    return inst._div(num, den) if inst.exact else num / den


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def check_inequality_44(inst: AplusInstance, h: Sequence[int], command: str = "inequality44", seed: int = 0) -> VerificationRecord:
    """Compare the weighted average with the threshold; pass iff its side matches the cusum sign."""
    h = tuple(h)
    scn = inst.scenario
    lhs = weighted_average_44(inst, h)
    cusum = cusum_at_aplus(inst, h)
    sd = scenario_dict(inst.c, inst.b, inst.k, inst.p, inst.q, scn.superscript, h)
    w = list(inst.w.entries)
    if lhs is None:
        verdict = "identically-zero" if cusum == 0 else "fail"
        return VerificationRecord(command, sd, "ineq44_margin", cusum, verdict, seed, w)
    margin = lhs - rhs_constant(inst.c, inst.b, inst.k, inst.p)
    if inst.exact:
        agree = _sign(margin) == _sign(cusum)
    else:
        tol = 1e-9 * max(1.0, abs(float(lhs)))
        agree = (abs(margin) <= tol and abs(cusum) <= tol) or _sign(margin) == _sign(cusum)
    return VerificationRecord(command, sd, "ineq44_margin", margin, "pass" if agree else "fail", seed, w)


# --------------------------------------------------------------------------- scenario enumeration


def contributing_subscripts(p: int, hmax: int) -> Iterator[tuple]:
    """All contributing ``h in [1..hmax]^p`` in lexicographic order."""
    for h in product(range(1, hmax + 1), repeat=p):
        if is_contributing(h):
            yield h


def scenarios(c_max: int, c_min: int = 3) -> Iterator[Scenario]:
    """Every ``(c, b, k, p, q)`` in the admissible ranges, one representative superscript each."""
    if c_max < 3:
        raise ValueError("c_max must be >= 3")
    for c in range(max(3, c_min), c_max + 1):
        for b in range(1, c):
            for k in range(1, c - b):
                for p in range(1, c - k + 1):
                    lo, hi = q_range(c, b, k, p)
                    for q in range(lo, hi + 1):
                        yield Scenario.representative(c, b, k, p, q)


def enumerate_scenarios(c_max: int) -> Iterator[tuple[Scenario, tuple]]:
    """Pairs (scenario, contributing h) with entries of h in ``1..c-1``."""
    for scn in scenarios(c_max):
        for h in contributing_subscripts(scn.p, scn.c - 1):
            yield scn, h
