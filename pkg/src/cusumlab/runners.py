"""Batch verifications behind the CLI subcommands; each returns a list of records.

Work is split into independent items (one scenario or range each) so it can be
fanned out over processes.  Outputs are sorted before writing, so the worker
count never changes what lands on disk.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .aplus import AplusInstance, CusumGrid, contributing_subscripts, q_range, rhs_constant, scenarios
from .certify import (
    NumeratorBuilder,
    certificate_record,
    certify_positivity,
    path_check_from_tables,
    stage_one_tables,
)
from .lemmas import (
    avg_decomposition_46,
    check_lemma43_bounds,
    check_stochastic_dominance,
    lemma41_average,
    single_index_signs,
)
from .muirhead import Configuration, OddsVector, Scenario, component_table
from .records import VerificationRecord, scenario_dict, sort_records
from .sampling import odds_draws, random_configuration, random_odds, rng_for
from .simplex import scan_A, write_curve_csv


@dataclass(frozen=True)
class SweepConfig:
    c_max: int = 6
    w_samples: int = 5
    seed: int = 0
    mode: str = "exact"
    timing: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.c_max < 3:
            raise ValueError("c_max must be >= 3")
        if self.w_samples < 1:
            raise ValueError("w_samples must be >= 1")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")


def worker_count() -> int:
    """CPU count, capped by ``CUSUMLAB_THREADS`` when set."""
    n = os.cpu_count() or 1
    cap = os.environ.get("CUSUMLAB_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"CUSUMLAB_THREADS must be an integer, got {cap!r}") from None
    return n


def fan_out(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """``fn`` over items, flattened; processes only when it pays off."""
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
            chunks = list(pool.map(fn, items))
    else:
        chunks = [fn(item) for item in items]
    return [rec for chunk in chunks for rec in chunk]


def _timed(fn: Callable, timing: bool) -> Callable:
    def run(item):
        start = time.perf_counter()
        out = fn(item)
        if timing:
            ms = int((time.perf_counter() - start) * 1000)
            for rec in out:
                rec.elapsed_ms = ms
        return out

    return run


class _Job:
    """Picklable (fn, config) pair for the process pool."""

    def __init__(self, fn, cfg):
        self.fn, self.cfg = fn, cfg

    def __call__(self, item):
        return _timed(lambda it: self.fn(it, self.cfg), self.cfg.timing)(item)


def run_batch(fn: Callable, items: Sequence, cfg: SweepConfig) -> list[VerificationRecord]:
    return sort_records(fan_out(_Job(fn, cfg), list(items), cfg.workers))


def _draws(c: int, cfg: SweepConfig, *labels) -> list[OddsVector]:
    draws = odds_draws(c, cfg.w_samples, cfg.seed, *labels)
    if cfg.mode == "float":
        draws = [OddsVector(tuple(float(x) for x in w.entries)) for w in draws]
    return draws


def _sd(scn: Scenario, h=None) -> dict:
    return scenario_dict(scn.c, scn.b, scn.k, scn.p, scn.q, scn.superscript, h)


# --------------------------------------------------------------------------- positivity sweeps


def _scenario_grids(scn: Scenario, cfg: SweepConfig):
    out = []
    for w in _draws(scn.c, cfg, scn.b, scn.k, scn.p, scn.q):
        out.append((w, CusumGrid(AplusInstance.from_scenario(scn, w))))
    return out


def lemma21_item(scn: Scenario, cfg: SweepConfig) -> list[VerificationRecord]:
    """One summary per scenario: the smallest contributing cusum (entries ``<= c-1``) over all draws."""
    best = best_w = best_h = None
    for w, grid in _scenario_grids(scn, cfg):
        for h in contributing_subscripts(scn.p, scn.c - 1):
            value = grid.cusum(h)
            if best is None or value < best:
                best, best_w, best_h = value, w, h
    sd = _sd(scn, best_h)
    return [VerificationRecord("verify lemma21", sd, "min_cusum", best, "pass" if best > 0 else "fail",
                               cfg.seed, list(best_w.entries))]


def sweep_item(scn: Scenario, cfg: SweepConfig) -> list[VerificationRecord]:
    """One record per contributing ``h`` (entries ``<= c-1``): the minimum over draws and its w."""
    grids = _scenario_grids(scn, cfg)
    out = []
    for h in contributing_subscripts(scn.p, scn.c - 1):
        value, w = min(((g.cusum(h), w) for w, g in grids), key=lambda t: t[0])
        out.append(VerificationRecord("sweep", _sd(scn, h), "min_cusum", value,
                                      "pass" if value > 0 else "fail", cfg.seed, list(w.entries)))
    return out


def oracle_item(scn: Scenario, cfg: SweepConfig) -> list[VerificationRecord]:
    """Engine against direct enumeration at ``a+`` for every ``h`` in ``[1..c]^p``; value = mismatches."""
    a = Configuration.plus(scn.c, scn.b, scn.k)
    mismatches = compared = 0
    for w in odds_draws(scn.c, cfg.w_samples, cfg.seed, "oracle", scn.b, scn.k, scn.p, scn.q):
        direct = component_table(scn, a, w, "exact")
        engine = CusumGrid(AplusInstance.from_scenario(scn, w))
        for h in contributing_subscripts(scn.p, scn.c):
            compared += 1
            if direct.cusum(h) != engine.cusum(h):
                mismatches += 1
    return [VerificationRecord("oracle", _sd(scn), "oracle_mismatches", mismatches,
                               "pass" if mismatches == 0 and compared else "fail", cfg.seed)]


def scenario_items(c_max: int) -> list[Scenario]:
    return list(scenarios(c_max))


# --------------------------------------------------------------------------- lemma checks


def lemma41_item(c: int, cfg: SweepConfig) -> list[VerificationRecord]:
    """Average ``k_J`` against the threshold for every range at this c, plus the sampling model."""
    out = []
    for b in range(1, c):
        for k in range(1, c - b):
            for p in range(1, c - k + 1):
                rhs = rhs_constant(c, b, k, p)
                for h in contributing_subscripts(p, c):
                    margin = lemma41_average(c, b, k, p, h) - rhs
                    sd = scenario_dict(c, b, k, p, h=h)
                    if h == (c,) * p:
                        out.append(VerificationRecord("verify lemma41", sd, "lemma41_equality", margin,
                                                      "pass" if margin == 0 else "fail", cfg.seed))
                    elif all(x <= c - 1 for x in h):
                        out.append(VerificationRecord("verify lemma41", sd, "lemma41_margin", margin,
                                                      "pass" if margin > 0 else "fail", cfg.seed))
    for b in range(1, c):
        for p in range(1, c):
            for h in contributing_subscripts(p, c):
                if h != (c,) * p:
                    out.append(check_stochastic_dominance(h, b, c, p, command="verify lemma41"))
    return out


def lemma42_item(key: tuple, cfg: SweepConfig) -> list[VerificationRecord]:
    """Sign pattern of single-index components; value = number of draws with a wrong pattern."""
    c, b, k, q = key
    bad = 0
    first_bad = None
    for w in odds_draws(c, cfg.w_samples, cfg.seed, "lemma42", b, k, q):
        pattern = single_index_signs(c, b, k, q, w)
        if not pattern.ok:
            bad += 1
            first_bad = first_bad or w
    sd = scenario_dict(c, b, k, 1, q)
    return [VerificationRecord("verify lemma42", sd, "sign_violations", bad, "pass" if bad == 0 else "fail",
                               cfg.seed, list(first_bad.entries) if first_bad else None)]


def lemma42_items(c_max: int) -> list[tuple]:
    out = []
    for c in range(3, c_max + 1):
        for b in range(1, c):
            for k in range(1, c - b):
                lo, hi = q_range(c, b, k, 1)
                out += [(c, b, k, q) for q in range(lo, hi + 1)]
    return out


def lemma43_item(key: tuple, cfg: SweepConfig) -> list[VerificationRecord]:
    """Bound margins per index ``j`` (minimum over draws) and the included/excluded identity."""
    c, b, k = key
    draws = odds_draws(c, cfg.w_samples, cfg.seed, "lemma43", b, k)
    out = []
    for j in range(1, c + 1):
        worst = None
        for w in draws:
            rec = check_lemma43_bounds(c, b, k, j, w, cfg.seed, "verify lemma43")
            if worst is None or rec.value < worst.value:
                worst = rec
        out.append(worst)
    for q in (0, 1):
        lo, hi = q_range(c, b, k, 1)
        if not lo <= q <= hi:
            continue
        bad = 0
        for w in draws:
            for h in range(1, c):
                dec = avg_decomposition_46(c, b, k, q, h, w)
                if not dec.combined() == dec.overall == dec.rhs:
                    bad += 1
        sd = scenario_dict(c, b, k, 1, q)
        out.append(VerificationRecord("verify lemma43", sd, "identity46_violations", bad,
                                      "pass" if bad == 0 else "fail", cfg.seed))
    return out


def lemma43_items(c_max: int) -> list[tuple]:
    return [(c, b, k) for c in range(3, c_max + 1) for b in range(1, c) for k in range(1, c - b)]


# --------------------------------------------------------------------------- sampled configurations


def theorem31_item(key: tuple, cfg: SweepConfig) -> list[VerificationRecord]:
    """Full-superscript cusums at sampled integer configurations, and stage-one paths.

    Odds are never all equal here (the theorem excludes that case, where the
    total cusum is identically zero).  ``cfg.w_samples`` is the number of
    (a, w) draws; every draw also gets a stage-one path on an 8-point grid.
    """
    c, b, k = key
    scn = Scenario.full(c, b, k)
    rng = rng_for(cfg.seed, "theorem31", c, b, k)
    worst = worst_w = worst_h = None
    path_fail = 0
    path_min = None
    for _ in range(cfg.w_samples):
        w = random_odds(c, rng)
        while w.lam == 0:
            w = random_odds(c, rng)
        a = random_configuration(c, b, k, rng)
        table = component_table(scn, a, w, "exact")
        for h in contributing_subscripts(scn.p, c):
            value = table.cusum(h)
            if worst is None or value < worst:
                worst, worst_w, worst_h = value, w, h
        tables = stage_one_tables(scn, w, 8)
        for h in contributing_subscripts(scn.p, c - 1):
            res = path_check_from_tables(scn, h, w, tables)
            if not res.ok:
                path_fail += 1
            low = min(res.values)
            path_min = low if path_min is None else min(path_min, low)
    return [
        VerificationRecord("verify theorem31", _sd(scn, worst_h), "min_cusum", worst,
                           "pass" if worst > 0 else "fail", cfg.seed, list(worst_w.entries)),
        VerificationRecord("verify theorem31", _sd(scn), "path_failures", path_fail,
                           "pass" if path_fail == 0 else "fail", cfg.seed),
    ]


def theorem31_items(c_max: int) -> list[tuple]:
    return lemma43_items(c_max)


# --------------------------------------------------------------------------- certificates


def certify_item(scn: Scenario, cfg: SweepConfig, hs: Sequence[tuple] | None = None) -> list[VerificationRecord]:
    builder = NumeratorBuilder.for_scenario(scn)
    if hs is None:
        hs = list(contributing_subscripts(scn.p, scn.c - 1))
    out = []
    for h in hs:
        result = certify_positivity(scn, h, builder, cfg.w_samples, cfg.seed)
        out.append(certificate_record(scn, h, result, cfg.seed))
    return out


# --------------------------------------------------------------------------- boundary curves


def curve_records(curve, command: str) -> list[VerificationRecord]:
    """Endpoint values and shape verdicts; the quasi-unimodality checks are report-grade."""
    prm = curve.params
    sd = scenario_dict(prm["c"], prm["b"], prm["k"], 2, 1, h=(1, prm["h2"]))
    v = curve.verdicts
    end = curve.middle[-1]
    rel = abs(end - float(curve.limit_value)) / float(curve.limit_value)
    out = [
        VerificationRecord(command, sd, "A_at_1", curve.initial_value, "report"),
        VerificationRecord(command, sd, "A_limit", curve.limit_value, "report"),
        VerificationRecord(command, sd, "A_end_rel_gap", rel, "report"),
        VerificationRecord(command, sd, "A_above_limit", min(curve.middle) - float(curve.limit_value),
                           "pass" if v["above_limit"] else "fail"),
        VerificationRecord(command, sd, "A_sign_changes", curve.sign_changes,
                           "pass" if v["at_most_two_changes"] else "report"),
    ]
    if "minimum_above_limit" in v:
        out.append(VerificationRecord(command, sd, "A_early_minimum_above_limit", int(v["minimum_above_limit"]),
                                      "pass" if v["minimum_above_limit"] else "report"))
    return sort_records(out)


def scan_records(c: int, b: int, k: int, h2: int, omega_max: float, points: int, out_path=None,
                 command: str = "scan-A") -> list[VerificationRecord]:
    curve = scan_A(c, b, k, h2, omega_max, points)
    if out_path is not None:
        write_curve_csv(curve, out_path)
    return curve_records(curve, command)

