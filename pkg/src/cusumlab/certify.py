"""Positivity certificates for cusums at a+, numeric fallback sweeps and stage-one path checks.

A cusum at ``a+`` is a rational function of the odds.  Multiplying through by
``prefactor * e_b(C) * prod_K e_b(C\\K)`` (all positive on the ordered region)
leaves an integer polynomial ``P(w)``.  Substituting ``w_j = 1 + s_j + ... + s_c``
maps the ordered region ``w_1 >= ... >= w_c >= 1`` onto the orthant ``s >= 0``,
so nonnegative coefficients plus a positive constant term prove positivity.
That criterion is sufficient, not necessary: an inconclusive certificate is
never a refutation and falls back to an exact numeric sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .aplus import AplusInstance, cusum_at_aplus, distinct_below, rhs_constant
from .combinatorics import binomial
from .muirhead import Configuration, OddsVector, Scenario, component_table, is_contributing
from .records import VerificationRecord, scenario_dict
from .sampling import odds_draws

MONOMIAL_CAP = 5_000_000


class CapExceeded(RuntimeError):
    """Raised when an expansion would store more than the monomial cap."""


class SparsePolynomial:
    """Integer polynomial in ``nvars`` variables.

    Exponent vectors are packed into a single int key with base ``degree_bound + 1``,
    so multiplying monomials is adding keys.  Zero coefficients are never stored.
    """

    __slots__ = ("nvars", "base", "terms")

    def __init__(self, nvars: int, base: int, terms: dict | None = None):
        self.nvars = nvars
        self.base = base
        self.terms = {key: v for key, v in (terms or {}).items() if v}

    # construction --------------------------------------------------------

    @classmethod
    def from_dict(cls, terms: dict, nvars: int | None = None, base: int | None = None) -> "SparsePolynomial":
        """From ``{exponent tuple: coefficient}``."""
        if nvars is None:
            nvars = len(next(iter(terms))) if terms else 1
        if base is None:
            base = max((sum(e) for e in terms), default=0) + 1
        out = cls(nvars, base)
        for exps, coeff in terms.items():
            if len(exps) != nvars:
                raise ValueError("exponent vector length differs from nvars")
            if coeff:
                key = out.pack(exps)
                out.terms[key] = out.terms.get(key, 0) + coeff
        out.terms = {k: v for k, v in out.terms.items() if v}
        return out

    @classmethod
    def constant(cls, value: int, nvars: int, base: int) -> "SparsePolynomial":
        return cls(nvars, base, {0: value})

    @classmethod
    def variable(cls, index: int, nvars: int, base: int) -> "SparsePolynomial":
        """``x_index`` with a 1-based index."""
        return cls(nvars, base, {base ** (index - 1): 1})

    def pack(self, exps: Sequence[int]) -> int:
        if sum(exps) >= self.base:
            raise ValueError("total degree exceeds the packing base")
        key = 0
        for e in reversed(tuple(exps)):
            key = key * self.base + e
        return key

    def unpack(self, key: int) -> tuple:
        out = []
        for _ in range(self.nvars):
            key, e = divmod(key, self.base)
            out.append(e)
        return tuple(out)

    # inspection ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list:
        """``(exponent tuple, coefficient)`` pairs in canonical (lexicographic) order."""
        return sorted((self.unpack(k), v) for k, v in self.terms.items())

    def to_dict(self) -> dict:
        return dict(self.items())

    def constant_term(self) -> int:
        return self.terms.get(0, 0)

    def degree(self) -> int:
        return max((sum(self.unpack(k)) for k in self.terms), default=0)

    def negative_count(self) -> int:
        return sum(1 for v in self.terms.values() if v < 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"SparsePolynomial(nvars={self.nvars}, terms={len(self.terms)})"

    def evaluate(self, point: Sequence) -> object:
        if len(point) != self.nvars:
            raise ValueError("point dimension differs from nvars")
        total = 0
        for exps, coeff in self.items():
            term = coeff
            for x, e in zip(point, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    # arithmetic ----------------------------------------------------------

    def _like(self, terms: dict) -> "SparsePolynomial":
        out = SparsePolynomial(self.nvars, self.base)
        out.terms = terms
        return out

    def _check(self, other: "SparsePolynomial") -> None:
        if self.nvars != other.nvars or self.base != other.base:
            raise ValueError("polynomials use different layouts")

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            s = terms.get(k, 0) + v
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        return self._like(terms)

    def __neg__(self) -> "SparsePolynomial":
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def scale(self, factor: int) -> "SparsePolynomial":
        if not factor:
            return self._like({})
        return self._like({k: v * factor for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        a, b = (self.terms, other.terms) if len(self.terms) <= len(other.terms) else (other.terms, self.terms)
        out: dict = {}
        get = out.get
        for ka, va in a.items():
            for kb, vb in b.items():
                key = ka + kb
                out[key] = get(key, 0) + va * vb
        if len(out) > MONOMIAL_CAP:
            raise CapExceeded(f"{len(out)} monomials exceed the cap of {MONOMIAL_CAP}")
        return self._like({k: v for k, v in out.items() if v})

    __rmul__ = __mul__


def product(polys: Iterable[SparsePolynomial], unit: SparsePolynomial) -> SparsePolynomial:
    out = unit
    for poly in polys:
        out = out * poly
    return out


def difference_substitution(poly: SparsePolynomial) -> SparsePolynomial:
    """Substitute ``w_j = 1 + s_j + s_{j+1} + ... + s_c`` (variable slots are reused for s).

    Done as the chain ``w_j = s_j + w_{j+1}`` for ``j < c`` and ``w_c = 1 + s_c``.
    Total degree never grows, so the packing base is kept.
    """
    n, base = poly.nvars, poly.base
    terms = dict(poly.terms)
    for j in range(n):
        unit = base ** j
        nxt = unit * base if j + 1 < n else 0
        out: dict = {}
        for key, coeff in terms.items():
            e = (key // unit) % base
            if e == 0:
                out[key] = out.get(key, 0) + coeff
                continue
            rest = key - e * unit
            for t in range(e + 1):
                new = rest + t * unit + (e - t) * nxt
                out[new] = out.get(new, 0) + coeff * math.comb(e, t)
        terms = {k: v for k, v in out.items() if v}
        if len(terms) > MONOMIAL_CAP:
            raise CapExceeded(f"{len(terms)} monomials exceed the cap of {MONOMIAL_CAP}")
    return poly._like(terms)


# --------------------------------------------------------------------------- numerators


def elementary_polynomial(indices: Sequence[int], degree: int, nvars: int, base: int) -> SparsePolynomial:
    """``e_degree`` of the variables ``w_m``, ``m`` in ``indices`` (1-based)."""
    terms = {}
    for subset in combinations(indices, degree):
        terms[sum(base ** (m - 1) for m in subset)] = 1
    return SparsePolynomial(nvars, base, terms)


class NumeratorBuilder:
    """Cleared-denominator numerators for every cusum of one (c, b, k, p, q) scenario.

    ``P_h / (prefactor * D) = S_[h](a+)`` with ``D = e_b(C) * prod_K e_b(C\\K)``.
    The per-set brackets are built once and reused across subscripts.
    """

    def __init__(self, c: int, b: int, k: int, p: int, q: int):
        self.c, self.b, self.k, self.p, self.q = c, b, k, p, q
        # any instance gives the prefactor and admissible-K bookkeeping
        self.inst = AplusInstance(c, b, k, p, q, OddsVector.ones(c))
        self.eliminations = self.inst.eliminations
        n_factors = len(self.eliminations) + 1
        self.degree = b * n_factors + p
        self.base = self.degree + 1
        self.unit = SparsePolynomial.constant(1, c, self.base)
        everything = range(1, c + 1)
        self.eb_all = elementary_polynomial(everything, b, c, self.base)
        self.eb_without = {
            K: elementary_polynomial([m for m in everything if m not in K], b, c, self.base)
            for K in self.eliminations
        }
        self._cofactors = None
        self._brackets: dict = {}

    @classmethod
    def for_scenario(cls, scn: Scenario) -> "NumeratorBuilder":
        return cls(scn.c, scn.b, scn.k, scn.p, scn.q)

    @property
    def prefactor(self) -> int:
        return self.inst.prefactor

    def denominator_factors(self) -> list:
        return [self.eb_all] + [self.eb_without[K] for K in self.eliminations]

    def denominator_at(self, w: Sequence) -> object:
        """``prefactor * D(w)``."""
        out = self.prefactor
        for poly in self.denominator_factors():
            out *= poly.evaluate(w)
        return out

    def cofactors(self) -> tuple:
        """``(D / e_b(C), {K: D / e_b(C\\K)})`` from prefix and suffix products."""
        if self._cofactors is None:
            factors = [self.eb_without[K] for K in self.eliminations]
            prefix = [self.unit]
            for f in factors:
                prefix.append(prefix[-1] * f)
            suffix = [self.unit]
            for f in reversed(factors):
                suffix.append(suffix[-1] * f)
            suffix.reverse()
            all_but = {
                K: self.eb_all * prefix[i] * suffix[i + 1]
                for i, K in enumerate(self.eliminations)
            }
            self._cofactors = (prefix[-1], all_but)
        return self._cofactors

    def bracket(self, J: Sequence[int]) -> SparsePolynomial:
        """``D`` times the bracket of the set ``J``."""
        J = tuple(sorted(J))
        if J not in self._brackets:
            d = self.b - self.q
            without_all, without_K = self.cofactors()
            everything = range(1, self.c + 1)
            total = SparsePolynomial(self.c, self.base)
            for K in self.inst.admissible_K(J):
                e = elementary_polynomial([m for m in everything if m not in J and m not in K], d, self.c, self.base)
                total = total + e * without_K[K]
            scale = binomial(self.c - self.b - self.p + self.q, self.k)
            e = elementary_polynomial([m for m in everything if m not in J], d, self.c, self.base)
            self._brackets[J] = total - (e * without_all).scale(scale)
        return self._brackets[J]

    def lead_polynomial(self, J: Sequence[int], h: Sequence[int]) -> SparsePolynomial:
        """Sum of ``w_j1 ... w_jq`` over orderings ``j`` of ``J`` with ``j <= h``."""
        terms: dict = {}
        for j in _orderings_below(J, h):
            key = sum(self.base ** (x - 1) for x in j[: self.q])
            terms[key] = terms.get(key, 0) + 1
        return SparsePolynomial(self.c, self.base, terms)

    def numerator(self, h: Sequence[int]) -> SparsePolynomial:
        h = tuple(h)
        total = SparsePolynomial(self.c, self.base)
        if not is_contributing(h):
            return total
        for J in sorted({tuple(sorted(j)) for j in distinct_below(h)}):
            total = total + self.lead_polynomial(J, h) * self.bracket(J)
        return total


def _orderings_below(J: Sequence[int], h: Sequence[int]):
    from itertools import permutations

    for j in permutations(J):
        if all(x <= y for x, y in zip(j, h)):
            yield j


@dataclass
class NumeratorPolynomial:
    numerator: SparsePolynomial
    builder: NumeratorBuilder

    def denominator_at(self, w: Sequence) -> object:
        return self.builder.denominator_at(w)

    def value_at(self, w: Sequence) -> Fraction:
        return Fraction(self.numerator.evaluate(w)) / self.denominator_at(w)


def cusum_numerator_polynomial(scn: Scenario, h: Sequence[int], builder: NumeratorBuilder | None = None) -> NumeratorPolynomial:
    """``P(w)`` with ``P / (prefactor * e_b(C) prod_K e_b(C\\K))`` equal to the cusum at ``a+``."""
    if builder is None:
        builder = NumeratorBuilder.for_scenario(scn)
    h = tuple(h)
    if len(h) != scn.p or any(not 1 <= x <= scn.c for x in h):
        raise ValueError(f"bad cusum subscript {h}")
    return NumeratorPolynomial(builder.numerator(h), builder)


# --------------------------------------------------------------------------- certificates


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def numeric_sweep(scn: Scenario, h: Sequence[int], samples: int = 100, seed: int = 0,
                  command: str = "sweep") -> VerificationRecord:
    """Exact cusums at ``a+`` over seeded odds (draw 0 all ones); the record keeps the minimum and its w."""
    h = tuple(h)
    sd = scenario_dict(scn.c, scn.b, scn.k, scn.p, scn.q, scn.superscript, h)
    best = best_w = None
    all_zero = True
    for w in odds_draws(scn.c, samples, seed, scn.b, scn.k, scn.p, scn.q):
        value = cusum_at_aplus(AplusInstance.from_scenario(scn, w), h)
        if value != 0:
            all_zero = False
        if best is None or value < best:
            best, best_w = value, w
    if all_zero:
        verdict = "identically-zero"
    else:
        verdict = "pass" if best > 0 else "fail"
    return VerificationRecord(command, sd, "min_cusum", best, verdict, seed, list(best_w.entries))


@dataclass(frozen=True)
class CertificateResult:
    status: str  # certified | inconclusive | cap
    constant_term_sign: int
    negative_coefficient_count: int
    monomials: int
    identically_zero: bool = False
    fallback: str | None = None  # "positive", "nonpositive" or "identically-zero"
    fallback_min: object = None

    def __post_init__(self):
        if self.status not in ("certified", "inconclusive", "cap"):
            raise ValueError(f"unknown certificate status {self.status!r}")
        if self.status == "certified" and (self.negative_coefficient_count or self.constant_term_sign <= 0):
            raise ValueError("certified requires nonnegative coefficients and a positive constant term")

    @property
    def verdict(self) -> str:
        """Record verdict: only a negative numeric fallback is a failure."""
        if self.identically_zero:
            return "identically-zero"
        if self.status == "certified":
            return "pass"
        if self.fallback == "nonpositive":
            return "fail"
        return "cap" if self.status == "cap" else "report"


def certify_positivity(scn: Scenario, h: Sequence[int], builder: NumeratorBuilder | None = None,
                       fallback_samples: int = 20, seed: int = 0) -> CertificateResult:
    """Difference-substitution certificate, with an exact numeric sweep when it is inconclusive."""
    h = tuple(h)
    try:
        poly = cusum_numerator_polynomial(scn, h, builder).numerator
        sub = difference_substitution(poly)
    except CapExceeded:
        rec = numeric_sweep(scn, h, fallback_samples, seed, "certify")
        return CertificateResult("cap", 0, 0, MONOMIAL_CAP, fallback=_fallback(rec), fallback_min=rec.value)
    if sub.is_zero():
        return CertificateResult("inconclusive", 0, 0, 0, identically_zero=True, fallback="identically-zero",
                                 fallback_min=Fraction(0))
    const = _sign(sub.constant_term())
    negatives = sub.negative_count()
    if negatives == 0 and const > 0:
        return CertificateResult("certified", const, 0, len(sub))
    rec = numeric_sweep(scn, h, fallback_samples, seed, "certify")
    return CertificateResult("inconclusive", const, negatives, len(sub), fallback=_fallback(rec),
                             fallback_min=rec.value)


def _fallback(rec: VerificationRecord) -> str:
    if rec.verdict == "identically-zero":
        return "identically-zero"
    return "positive" if rec.verdict == "pass" else "nonpositive"


def certificate_record(scn: Scenario, h: Sequence[int], result: CertificateResult, seed: int = 0,
                       command: str = "certify") -> VerificationRecord:
    """Serialize a certificate: the value is the count of negative coefficients after substitution."""
    sd = scenario_dict(scn.c, scn.b, scn.k, scn.p, scn.q, scn.superscript, tuple(h))
    return VerificationRecord(command, sd, f"certificate:{result.status}:{result.fallback or 'none'}",
                              result.negative_coefficient_count, result.verdict, seed)


def equal_odds_margin(scn: Scenario, h: Sequence[int]) -> Fraction:
    """Cusum at ``a+`` with all odds equal."""
    return cusum_at_aplus(AplusInstance.from_scenario(scn, OddsVector.ones(scn.c)), h)


def equal_odds_threshold(scn: Scenario) -> Fraction:
    return rhs_constant(scn.c, scn.b, scn.k, scn.p)


# --------------------------------------------------------------------------- stage-one paths


@dataclass(frozen=True)
class PathResult:
    values: tuple  # G at x = 0+ followed by the grid points
    positive: bool
    nondecreasing: bool

    @property
    def ok(self) -> bool:
        return self.positive and self.nondecreasing


def path_points(grid: int, r=None) -> list:
    """``x_m = m r / grid`` for ``m = 1..grid``; ``r`` defaults to ``grid`` so every point is an integer."""
    if grid < 8:
        raise ValueError("grid needs at least 8 points")
    r = grid if r is None else r
    return [Fraction(m * r, grid) if isinstance(r, int) else m * r / grid for m in range(1, grid + 1)]


def stage_one_tables(scn: Scenario, w: OddsVector, grid: int = 8, r=None) -> list:
    """Component tables along ``(r, ..., r, x, ..., x, 0, ..., 0)`` for ``x`` in ``path_points``.

    With integer points the oracle runs in exact arithmetic; otherwise in floats.
    """
    c, b, k = scn.c, scn.b, scn.k
    if c - b - k < 1:
        raise ValueError("stage-one path needs a nonempty middle block")
    r = grid if r is None else r
    tables = []
    for x in path_points(grid, r):
        exact = isinstance(x, Fraction) and x.denominator == 1 and w.is_rational()
        x = int(x) if exact else float(x)
        a = Configuration.path(c, b, k, x, r if exact else float(r))
        tables.append(component_table(scn, a, w, "exact" if exact else "float"))
    return tables


def aplus_at_r(scn: Scenario, h: Sequence[int], w: OddsVector, r):
    """``G(0+)``: the a+ limit with top exponent ``r`` is the engine value at odds ``w**r``."""
    if isinstance(r, int) and w.is_rational():
        powered = OddsVector(tuple(Fraction(v) ** r for v in w.entries))
    else:
        powered = OddsVector(tuple(float(v) ** float(r) for v in w.entries))
    return cusum_at_aplus(AplusInstance.from_scenario(scn, powered), h)


def path_check_from_tables(scn: Scenario, h: Sequence[int], w: OddsVector, tables: Sequence, r=None,
                           rel_tol: float = 1e-9) -> PathResult:
    h = tuple(h)
    r = (len(tables) if r is None else r)
    values = [aplus_at_r(scn, h, w, r)] + [t.cusum(h) for t in tables]
    positive = all(v > 0 for v in values)
    scale = max(abs(v) for v in values)
    tol = scale * (Fraction(rel_tol) if all(isinstance(v, Fraction) for v in values) else rel_tol)
    nondecreasing = all(y >= x - tol for x, y in zip(values, values[1:]))
    return PathResult(tuple(values), positive, nondecreasing)


def theorem31_path_check(scn: Scenario, h: Sequence[int], w: OddsVector, grid: int = 8, seed: int = 0,
                         r=None, command: str = "theorem31") -> VerificationRecord:
    """``G(x) = S_[h](r, ..., r, x, ..., x, 0, ..., 0)`` on ``x in (0, r]``: positive and nondecreasing.

    ``G(0+)`` comes from the ``a+`` engine, the grid points from direct enumeration.
    The default ``r = grid`` keeps every exponent integral and the check exact.
    The recorded value is the smallest G seen.
    """
    h = tuple(h)
    if not is_contributing(h):
        raise ValueError(f"subscript {h} is not contributing")
    r = grid if r is None else r
    result = path_check_from_tables(scn, h, w, stage_one_tables(scn, w, grid, r), r)
    sd = scenario_dict(scn.c, scn.b, scn.k, scn.p, scn.q, scn.superscript, h)
    return VerificationRecord(command, sd, "path_min_G", min(result.values), "pass" if result.ok else "fail",
                              seed, list(w.entries))
