"""Simplex boundary odds ``W^(g)(omega)`` and the weighted average ``A(omega)`` behind Figure 1.

Odds vectors with two distinct values reduce every elementary symmetric sum to
``e_d(m omegas, n ones) = sum_t C(m,t) C(n,d-t) omega^t``, so the double-index
(``p = 2``, ``q = 1``, ``h = (1, h2)``) weighted average is cheap for any c.
Curves are evaluated exactly at the float grid points and rounded once.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .aplus import AplusInstance, rhs_constant, weighted_average_44
from .combinatorics import binomial
from .muirhead import OddsVector

FIGURE1 = {"c": 48, "b": 25, "k": 22, "h2": 47}
DEFAULT_OMEGA_MAX = 1e6
DEFAULT_POINTS = 400
DEAD_BAND = 1e-12


def simplex_vector(g: int, omega, c: int) -> OddsVector:
    """``(omega, ..., omega, 1, ..., 1)`` with ``g`` leading omegas."""
    if not 1 <= g <= c - 1:
        raise ValueError(f"need 1 <= g <= c-1, got g={g}")
    if omega < 1:
        raise ValueError("omega must be >= 1")
    one = Fraction(1) if isinstance(omega, (int, Fraction)) else 1.0
    return OddsVector((omega,) * g + (one,) * (c - g))


def two_valued_e(m: int, n: int, d: int, omega):
    """``e_d`` of a multiset with ``m`` copies of ``omega`` and ``n`` ones."""
    if d < 0:
        return 0
    return sum(binomial(m, t) * binomial(n, d - t) * omega ** t for t in range(max(0, d - n), min(m, d) + 1))


def limit_ratio_47(c: int, k: int, g: int, j2: int) -> Fraction:
    """Large-omega limit of ``R_{{1,j2}.}`` under ``W^(g)(omega)`` (``p = 2``, ``q = 1``)."""
    if not 2 <= j2 <= c - 1:
        raise ValueError(f"need 2 <= j2 <= c-1, got {j2}")
    if c - g == k:
        raise ValueError("g = c - k makes the divisor 1 - k/(c-g) vanish")
    base = (1 - Fraction(k, c)) * (1 - Fraction(k, c - 1))
    return base if j2 <= g else base / (1 - Fraction(k, c - g))


def _ratio_J(c: int, b: int, k: int, g: int, j2: int, omega):
    """``R_{{1,j2}.}(W^(g)(omega))`` and ``u_{{1,j2}}`` (q = 1) from two-valued closed forms.

    With ``g <= b`` every admissible K consists of unit odds, so each ``R_JK``
    equals the average.
    """
    d = b - 1
    mJ = 1 + (1 if j2 <= g else 0)
    nJ = 2 - mJ
    e_rest = two_valued_e(g - mJ, c - g - k - nJ, d, omega)
    e_all = two_valued_e(g, c - g, b, omega)
    u = two_valued_e(g - mJ, c - g - nJ, d, omega)
    e_noK = two_valued_e(g, c - g - k, b, omega)
    num = e_rest * e_all * binomial(c - 2, d) * binomial(c - k, b)
    den = u * e_noK * binomial(c - k - 2, d) * binomial(c, b)
    return num / den, u


def _k_J(c: int, b: int, k: int, j2: int) -> int:
    return binomial(c - b - 2 + (2 if j2 <= b else 1), k)


def _as_number(omega):
    return omega if isinstance(omega, (int, Fraction)) else Fraction(omega)


def boundary_terms(omega, c: int, b: int, k: int, g: int | None = None) -> tuple:
    """``(C(c-b,k) R_{{1,b}.}, C(c-b-1,k) R_{{1,b+1}.})``, the top and bottom curves."""
    g = b if g is None else g
    x = _as_number(omega)
    top = binomial(c - b, k) * _ratio_J(c, b, k, g, b, x)[0]
    bottom = binomial(c - b - 1, k) * _ratio_J(c, b, k, g, b + 1, x)[0]
    return top, bottom


def weighted_average_A(omega, c: int, b: int, k: int, h2: int, g: int | None = None):
    """``u_J``-weighted mean of ``k_J R_{J.}`` over ``J = {1, j2}``, ``j2 = 2..h2``, at ``W^(g)(omega)``.

    Exact (Fraction) for rational omega; floats are converted exactly first, so
    the result is a Fraction either way.
    """
    g = b if g is None else g
    if b < 2:
        raise ValueError("need b >= 2")
    if not 2 <= h2 <= c - 1:
        raise ValueError(f"need 2 <= h2 <= c-1, got {h2}")
    if not 1 <= g <= b:
        raise ValueError("need 1 <= g <= b")
    x = _as_number(omega)
    cache: dict = {}
    num = den = 0
    for j2 in range(2, h2 + 1):
        key = (j2 <= g, j2 <= b)
        if key not in cache:
            ratio, u = _ratio_J(c, b, k, g, j2, x)
            cache[key] = (u, _k_J(c, b, k, j2) * ratio)
        u, value = cache[key]
        num += u * value
        den += u
    return Fraction(num) / den


# --------------------------------------------------------------------------- scans


@dataclass
class BoundaryCurve:
    omega_grid: list
    top: list
    bottom: list
    middle: list
    sign_changes: int
    limit_value: Fraction
    initial_value: Fraction
    params: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)

    def rows(self):
        return zip(self.omega_grid, self.top, self.bottom, self.middle)


def log_grid(omega_max: float = DEFAULT_OMEGA_MAX, points: int = DEFAULT_POINTS) -> list:
    """``points`` log-spaced values from exactly 1 to exactly ``omega_max``."""
    if points < 2 or omega_max <= 1:
        raise ValueError("need points >= 2 and omega_max > 1")
    grid = list(np.logspace(0.0, math.log10(omega_max), points))
    grid[0], grid[-1] = 1.0, float(omega_max)
    return [float(x) for x in grid]


def sign_changes(values, dead_band: float = DEAD_BAND) -> tuple[int, list]:
    """Sign changes of the forward differences, ignoring steps within ``dead_band`` (relative).

    Returns the count and the grid indices where the differences turn from
    negative to positive (local minima).
    """
    signs = []
    for i in range(len(values) - 1):
        step = values[i + 1] - values[i]
        if abs(step) <= dead_band * max(abs(values[i]), abs(values[i + 1])):
            continue
        signs.append((1 if step > 0 else -1, i + 1))
    changes = 0
    minima = []
    for (s0, _), (s1, i1) in zip(signs, signs[1:]):
        if s0 != s1:
            changes += 1
            if s0 < 0 < s1:
                minima.append(i1 - 1 if i1 > 0 else 0)
    return changes, minima


def scan_A(c: int, b: int, k: int, h2: int, omega_max: float = DEFAULT_OMEGA_MAX, points: int = DEFAULT_POINTS) -> BoundaryCurve:
    """Top, bottom and middle curves on a log grid plus the shape verdicts.

    Verdicts: ``above_limit`` (A exceeds the threshold everywhere on the grid),
    ``at_most_two_changes`` and ``minimum_above_limit`` (when there are two
    changes, the first local minimum stays above the limit).
    """
    grid = log_grid(omega_max, points)
    limit = rhs_constant(c, b, k, 2)
    top, bottom, middle, exact_middle = [], [], [], []
    for omega in grid:
        t, bt = boundary_terms(omega, c, b, k)
        a = weighted_average_A(omega, c, b, k, h2)
        top.append(float(t))
        bottom.append(float(bt))
        middle.append(float(a))
        exact_middle.append(a)
    changes, minima = sign_changes(middle)
    verdicts = {
        "above_limit": all(a > limit for a in exact_middle),
        "at_most_two_changes": changes <= 2,
    }
    if changes == 2 and minima:
        verdicts["minimum_above_limit"] = exact_middle[minima[0]] > limit
    return BoundaryCurve(
        omega_grid=grid, top=top, bottom=bottom, middle=middle, sign_changes=changes,
        limit_value=limit, initial_value=weighted_average_A(1, c, b, k, h2),
        params={"c": c, "b": b, "k": k, "h2": h2, "omega_max": omega_max, "points": points},
        verdicts=verdicts,
    )


def write_curve_csv(curve: BoundaryCurve, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["omega", "top", "bottom", "middle"])
        for row in curve.rows():
            writer.writerow([f"{x:.17g}" for x in row])


def emit_figure1(path: str | Path, omega_max: float = DEFAULT_OMEGA_MAX, points: int = DEFAULT_POINTS,
                 h2: int = FIGURE1["h2"]) -> BoundaryCurve:
    """Write the Figure 1 data (c=48, b=g=25, k=22) as ``omega,top,bottom,middle`` CSV."""
    curve = scan_A(FIGURE1["c"], FIGURE1["b"], FIGURE1["k"], h2, omega_max, points)
    write_curve_csv(curve, path)
    return curve


def wtd_avg(w: OddsVector, b: int, k: int, h2: int):
    """The ``p = 2``, ``q = 1``, ``h = (1, h2)`` weighted average for an arbitrary odds vector."""
    inst = AplusInstance(w.c, b, k, 2, 1, w)
    return weighted_average_44(inst, (1, h2))


@dataclass(frozen=True)
class OmegaStarResult:
    multiple: int | None
    wtd_avg: object
    boundary_avg: object


def omega_star_search(w: OddsVector, b: int, k: int, h2: int, max_power: int = 10) -> OmegaStarResult:
    """Smallest ``m`` in ``1, 2, 4, ..., 2**max_power`` with ``WtdAvg(w) >= A(m w_1)``; ``None`` if none."""
    target = wtd_avg(w, b, k, h2)
    last = None
    for power in range(max_power + 1):
        m = 2 ** power
        last = weighted_average_A(m * Fraction(w[1]), w.c, b, k, h2)
        if target >= last:
            return OmegaStarResult(m, target, last)
    return OmegaStarResult(None, target, last)
