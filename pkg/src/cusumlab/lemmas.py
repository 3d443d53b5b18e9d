"""Equal-odds positivity, the sequential sampling model, and single-index sign and bound checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from .aplus import (
    AplusInstance,
    avg_cross_product_ratio,
    component_at_aplus,
    distinct_below,
    rhs_constant,
)
from .combinatorics import binomial, elementary_symmetric
from .muirhead import OddsVector, is_contributing
from .records import VerificationRecord, scenario_dict


def _check_h(h: Sequence[int], c: int, p: int | None = None) -> tuple:
    h = tuple(h)
    if p is not None and len(h) != p:
        raise ValueError(f"subscript {h} must have {p} entries")
    if any(not 1 <= x <= c for x in h):
        raise ValueError(f"subscript {h} has entries outside 1..{c}")
    if not is_contributing(h):
        raise ValueError(f"subscript {h} is not contributing")
    return h


def lemma41_average(c: int, b: int, k: int, p: int, h: Sequence[int]) -> Fraction:
    """Average of ``k_J = C(c-b-p+q'[j], k)`` over distinct-entry ``[j] <= [h]``, by enumeration."""
    h = _check_h(h, c, p)
    total = count = 0
    for j in distinct_below(h):
        total += binomial(c - b - p + sum(1 for x in j if x <= b), k)
        count += 1
    return Fraction(total, count)


# --------------------------------------------------------------------------- sequential model


@dataclass(frozen=True)
class QpDistribution:
    """Law of ``q_p[J]``, the number of draws ``<= b`` in the sequential model for ``h``."""

    pmf: dict
    h: tuple
    b: int
    c: int
    p: int

    def support(self) -> tuple:
        return tuple(sorted(self.pmf))

    def survival(self, t: int) -> Fraction:
        """``P[q_p > t]``."""
        return sum((v for q, v in self.pmf.items() if q > t), Fraction(0))

    def expectation(self, fn) -> Fraction:
        return sum((v * fn(q) for q, v in self.pmf.items()), Fraction(0))

    def mean(self) -> Fraction:
        return self.expectation(lambda q: q)


def qp_distribution(h: Sequence[int], b: int, c: int, p: int | None = None) -> QpDistribution:
    """Exact pmf by dynamic programming over the count of draws ``<= b``.

    ``J_1`` is uniform on ``{1..h_1}`` and ``J_alpha`` uniform on ``{1..h_alpha}``
    minus the earlier draws.  Subscripts are visited in ascending order; the set
    of ``[j] <= [h]`` (and so every average over it) is invariant under permuting
    ``h``, and with ascending thresholds the model is uniform over that set.  The
    state then only needs ``q``: at step alpha there are ``h_alpha - alpha + 1``
    open values, ``min(b, h_alpha) - q`` of them ``<= b``.
    """
    h = _check_h(h, c, p)
    p = len(h)
    state = {0: Fraction(1)}
    for alpha, limit in enumerate(sorted(h)):
        open_values = limit - alpha
        low = min(b, limit)
        nxt: dict = {}
        for q, prob in state.items():
            hit = Fraction(low - q, open_values)
            if hit:
                nxt[q + 1] = nxt.get(q + 1, 0) + prob * hit
            if hit != 1:
                nxt[q] = nxt.get(q, 0) + prob * (1 - hit)
        state = nxt
    return QpDistribution({q: v for q, v in sorted(state.items()) if v}, h, b, c, p)


def qp_distribution_bruteforce(h: Sequence[int], b: int, c: int) -> dict:
    """Walk every path of the sequential model (ascending thresholds) with its probability."""
    h = _check_h(h, c)
    pmf: dict = {}

    def walk(alpha, used, prob):
        if alpha == len(h):
            q = sum(1 for x in used if x <= b)
            pmf[q] = pmf.get(q, 0) + prob
            return
        choices = [x for x in range(1, sorted(h)[alpha] + 1) if x not in used]
        for x in choices:
            walk(alpha + 1, used + (x,), prob / len(choices))

    walk(0, (), Fraction(1))
    return dict(sorted(pmf.items()))


def uniform_q_distribution(h: Sequence[int], b: int) -> dict:
    """Law of ``q'[j]`` when ``[j]`` is uniform over distinct-entry subscripts ``<= h`` (any order of h)."""
    counts: dict = {}
    n = 0
    for j in distinct_below(h):
        q = sum(1 for x in j if x <= b)
        counts[q] = counts.get(q, 0) + 1
        n += 1
    return {q: Fraction(v, n) for q, v in sorted(counts.items())}


def hypergeometric_pmf(b: int, p: int, c: int) -> dict:
    """Successes in ``p`` draws without replacement from ``c`` items, ``b`` of them successes."""
    total = binomial(c, p)
    return {
        q: Fraction(binomial(b, q) * binomial(c - b, p - q), total)
        for q in range(max(0, p - (c - b)), min(b, p) + 1)
    }


def check_stochastic_dominance(h: Sequence[int], b: int, c: int, p: int | None = None,
                               reference: Sequence[int] | None = None, command: str = "lemma41") -> VerificationRecord:
    """``P_h[q_p > t] >= P_ref[q_p > t]`` for all t, strictly for some t; ``ref = (c, ..., c)`` by default.

    All-equal survival functions are reported rather than passed.
    """
    h = tuple(h)
    p = len(h) if p is None else p
    ref = tuple(reference) if reference is not None else (c,) * p
    dist, base = qp_distribution(h, b, c, p), qp_distribution(ref, b, c, p)
    diffs = [dist.survival(t) - base.survival(t) for t in range(-1, p + 1)]
    if any(d < 0 for d in diffs):
        verdict = "fail"
    elif any(d > 0 for d in diffs):
        verdict = "pass"
    else:
        verdict = "report"
    sd = scenario_dict(c, b, p=p, h=h)
    return VerificationRecord(command, sd, "qp_mean_shift", dist.mean() - base.mean(), verdict)


# --------------------------------------------------------------------------- single-index case


@dataclass(frozen=True)
class SignPattern:
    values: tuple
    signs: tuple
    expected: tuple

    @property
    def ok(self) -> bool:
        return self.signs == self.expected


def single_index_signs(c: int, b: int, k: int, q: int, w: OddsVector) -> SignPattern:
    """``F_[j](a+)`` for ``j = 1..c`` with ``p = 1``; expected signs + for ``j <= b``, - after."""
    inst = AplusInstance(c, b, k, 1, q, w)
    values = tuple(component_at_aplus(inst, (j,)) for j in range(1, c + 1))
    signs = tuple((v > 0) - (v < 0) for v in values)
    expected = tuple(1 if j <= b else -1 for j in range(1, c + 1))
    return SignPattern(values, signs, expected)


def lemma43_bound(c: int, b: int, k: int, j: int) -> Fraction:
    """Lower bound ``1 - k/c`` (j <= b) or upper bound ``(1 - k/c)/(1 - k/(c-b))`` (j > b)."""
    base = 1 - Fraction(k, c)
    return base if j <= b else base / (1 - Fraction(k, c - b))


def check_lemma43_bounds(c: int, b: int, k: int, j: int, w: OddsVector, seed: int = 0, command: str = "lemma43") -> VerificationRecord:
    """Average cross-product ratio of ``J = {j}`` against its bound (non-strict); q is 0 for ``j <= b`` else 1."""
    q = 0 if j <= b else 1
    inst = AplusInstance(c, b, k, 1, q, w)
    ratio = avg_cross_product_ratio(inst, (j,))
    bound = lemma43_bound(c, b, k, j)
    margin = ratio - bound if j <= b else bound - ratio
    sd = scenario_dict(c, b, k, 1, q, h=(j,))
    return VerificationRecord(command, sd, "lemma43_margin", margin, "pass" if margin >= 0 else "fail",
                              seed, list(w.entries))


@dataclass(frozen=True)
class Decomposition46:
    overall: object
    avg_plus: object
    avg_minus: object
    weight_plus: object
    weight_minus: object
    rhs: Fraction

    def combined(self):
        out = self.weight_plus * self.avg_plus if self.weight_plus else 0
        if self.weight_minus:
            out += self.weight_minus * self.avg_minus
        return out


@lru_cache(maxsize=256)
def _single_index_terms(c: int, b: int, k: int, q: int, w: OddsVector) -> tuple:
    """``(wbar_J u_J, k_J R_J.)`` for ``J = {j}``, ``j = 1..c``, in the caller's odds."""
    inst = AplusInstance(c, b, k, 1, q, w)
    odds = [Fraction(x) for x in w.entries] if inst.exact else [float(x) for x in w.entries]
    out = []
    for j in range(1, c + 1):
        lead = odds[j - 1] if q == 1 else 1
        u = elementary_symmetric((odds[m - 1] for m in range(1, c + 1) if m != j), b - q)
        kj = inst.k_J((j,))
        value = kj * avg_cross_product_ratio(inst, (j,)) if kj else 0
        out.append((lead * u, value))
    return tuple(out)


def avg_decomposition_46(c: int, b: int, k: int, q: int, h: int, w: OddsVector, p: int = 1) -> Decomposition46:
    """Split the unrestricted weighted average of ``k_J R_J.`` into included (``j <= h``) and excluded parts."""
    if p != 1:
        raise ValueError("the included/excluded split needs p = 1")
    terms = _single_index_terms(c, b, k, q, w)
    plus, minus = terms[:h], terms[h:]
    total = sum(wt for wt, _ in terms)

    def avg(group):
        mass = sum(wt for wt, _ in group)
        return sum(wt * v for wt, v in group) / mass if group else None

    w_plus = sum(wt for wt, _ in plus) / total
    w_minus = sum(wt for wt, _ in minus) / total
    overall = sum(wt * v for wt, v in terms) / total
    return Decomposition46(overall, avg(plus), avg(minus), w_plus, w_minus, rhs_constant(c, b, k, 1))
