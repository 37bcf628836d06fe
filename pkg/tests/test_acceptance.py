"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a one-line verdict that the terminal summary prints.
"""
import math
import time

import numpy as np
import pytest

from obliq import (
    Method,
    geometric_mean,
    kappa_tilde,
    madansky_variances,
    mle,
    mle_circularity,
    moment_clamped,
    moment_raw,
    ols_horizontal,
    ols_vertical,
    perpendicular,
    minimum_deviation,
    table3_row,
)
from obliq.oblique import lambda_for_slope, p4_eval, solve_slope_for_lambda
from obliq.simulation import KAPPA_GRID_LABELS, SimulationConfig, parse_ratio
from obliq.simulation import run_kappa_misspecification, run_study
from obliq.stats import SummaryStats
from obliq.tables import MC_SIGMA_DELTA, PUBLISHED, TABLE_SEEDS, build_table

from conftest import random_stats, record
from oracles import grid_argmin, reduced_sse


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_c1_table1():
    table, secs = _timed(lambda: build_table(1))
    worst = max(r["abs_diff"] for r in table.rows)
    ok = len(table.rows) == 36 and worst <= 1e-3 and secs < 1.0
    record("C1 Table 1", ok, f"36 cells, max |diff| {worst:.2e} (<= 1e-3), {secs:.3f}s")
    assert ok


def test_c2_table2():
    table, secs = _timed(lambda: build_table(2))
    worst = max(r["abs_diff"] for r in table.rows)
    halves = [r for r in table.rows if r["kappa"] == 1.0 / r["sxx_over_syy"]]
    half_ok = len(halves) == 12 and all(abs(r["computed"] - 0.5) <= 1e-3 for r in halves)
    ok = len(table.rows) == 36 and worst <= 1e-3 and half_ok and secs < 1.0
    record("C2 Table 2", ok,
           f"36 cells, max |diff| {worst:.2e}, {len(halves)} cells at 0.500, {secs:.3f}s")
    assert ok


def test_c3_table4():
    table = build_table(4)
    worst = 0.0
    for row in table.rows:
        for col in ("ver", "moment", "hor", "kappa_tilde", "mle"):
            worst = max(worst, row[f"{col}_abs_diff"])
    last = table.rows[-1]
    circ = max(abs(r["mle_computed"] - r["moment_computed"]) for r in table.rows)
    ok = (len(table.rows) == 8 and worst <= 5e-4 and last["kappa_tilde_computed"] == math.inf
          and circ <= 1e-3)
    record("C3 Table 4", ok,
           f"8 rows, max |diff| {worst:.2e} (<= 5e-4), last kappa~ = "
           f"{last['kappa_tilde_computed']}, max |mle - moment| {circ:.1e}")
    assert ok


def _table3_errors(s, kappa):
    """Worst relative closed-form vs direct gap, the same gap divided by the
    cancellation factor ``(S/n) / variance``, and the worst ratio error."""
    slopes = {Method.VER: ols_vertical(s).beta1, Method.HOR: ols_horizontal(s).beta1,
              Method.GM: geometric_mean(s).beta1, Method.PER: perpendicular(s).beta1,
              Method.MLE: mle(s, kappa).beta1}
    rel = scaled = ratio = 0.0
    for m, b in slopes.items():
        closed = table3_row(m, s, kappa if m is Method.MLE else None)
        direct = madansky_variances(b, s)
        for name, base in (("sigma_delta_sq", s.sxx), ("sigma_tau_sq", s.syy)):
            a, c = getattr(closed, name), getattr(direct, name)
            if a == 0:
                rel = max(rel, abs(c) / (base / s.n))
                continue
            rel = max(rel, abs(a - c) / a)
            scaled = max(scaled, abs(a - c) / (base / s.n))
        if m in (Method.PER, Method.MLE):
            want = 1.0 if m is Method.PER else kappa
            ratio = max(ratio, abs(closed.kappa_tilde - want) / want,
                        abs(direct.kappa_tilde - want) / want)
    return rel, scaled, ratio


def test_c4_table3_identities():
    # Sums within two decades of each other, |rho| <= 0.95, kappa in [0.1, 10].
    rng = np.random.default_rng(4)
    worst = worst_k = 0.0
    for _ in range(500):
        sxx, syy = 10 ** rng.uniform(-1, 1, 2)
        rho = rng.uniform(0.05, 0.95) * rng.choice([-1.0, 1.0])
        s = SummaryStats.from_moments(sxx, syy, rho=rho, n=int(rng.integers(3, 1000)))
        rel, _, ratio = _table3_errors(s, 10 ** rng.uniform(-1, 1))
        worst, worst_k = max(worst, rel), max(worst_k, ratio)
    # Wider draws: a variance that is a tiny fraction of S/n inherits the
    # rounding of the slope, so there the gap is bounded against S/n instead.
    wide = 0.0
    for _ in range(500):
        _, scaled, _ = _table3_errors(random_stats(rng), 10 ** rng.uniform(-2, 2))
        wide = max(wide, scaled)
    ok = worst <= 1e-10 and worst_k <= 1e-10 and wide <= 1e-14
    record("C4 Table 3 identities", ok,
           f"500 stats, max rel diff {worst:.1e}, max kappa~ error {worst_k:.1e} (<= 1e-10); "
           f"500 wide-range stats, gap / (S/n) {wide:.1e}")
    assert ok


def test_c5_fixed_point_identities():
    rng = np.random.default_rng(5)
    p1 = p2 = p3 = 0.0
    for _ in range(1000):
        s = random_stats(rng)
        gm = geometric_mean(s).beta1
        # Each P4 term is O(sqrt(Syy/Sxx)) at the gm slope; compare against that.
        p1 = max(p1, abs(p4_eval(gm, 0.5, s)) / abs(gm))
        ev = madansky_variances(gm, s)
        p2 = max(p2, abs(math.sqrt(ev.sigma_tau_sq / ev.sigma_delta_sq) / abs(gm) - 1))
        lo, hi = s.sxy / s.sxx, s.syy / s.sxy
        b = lo + rng.uniform(0.01, 0.99) * (hi - lo)
        p3 = max(p3, abs(mle_circularity(b, s) - b) / abs(b))
    ok = p1 <= 1e-12 and p2 <= 1e-12 and p3 <= 1e-9
    record("C5 GM root, SD-ratio fixed point, circularity", ok,
           f"1000 instances each, P4(gm) {p1:.1e}, SD ratio {p2:.1e}, circularity {p3:.1e}")
    assert ok


def test_c6_oracle():
    rng = np.random.default_rng(6)
    worst = trip = 0.0
    for _ in range(200):
        s = random_stats(rng)
        lam = rng.uniform(0.01, 0.99)
        lo, hi = sorted((s.sxy / s.sxx, s.syy / s.sxy))
        want = grid_argmin(lambda v: reduced_sse(v, lam, s.sxx, s.syy, s.sxy), lo, hi)
        got = solve_slope_for_lambda(lam, s).beta1
        worst = max(worst, abs(got - want))
        trip = max(trip, abs(lambda_for_slope(got, s) - lam))
    for lam in np.round(np.arange(0.01, 1.0, 0.04), 2):
        s = random_stats(rng)
        trip = max(trip, abs(lambda_for_slope(solve_slope_for_lambda(lam, s).beta1, s) - lam))
    ok = worst <= 1e-6 and trip <= 1e-9
    record("C6 Oracle equivalence", ok,
           f"200 instances, max |solve - grid| {worst:.1e} (<= 1e-6), round trip {trip:.1e}")
    assert ok


MC_ROWS = ("ver", "ols*", "hor", "per", "gm", "mom", "copas", "md")


def test_c7_monte_carlo():
    t0 = time.perf_counter()
    failures, lines = [], []
    for which in (6, 7, 8):
        cfg = SimulationConfig(sigma_delta=MC_SIGMA_DELTA[which], sigma_tau=1.0,
                               n=100, replications=1000, seed=TABLE_SEEDS[which])
        rows = {r["estimator"]: r for r in run_study(cfg).as_rows()}
        for name in MC_ROWS:
            mse_p, bias_p = PUBLISHED[which][name][:2]
            mse_c, bias_c = rows[name]["mse_e3"], rows[name]["percent_bias"]
            if np.sign(bias_c) != np.sign(bias_p):
                failures.append(f"T{which} {name} bias sign")
            if abs(bias_c - bias_p) > 1.5:
                failures.append(f"T{which} {name} bias {bias_c:.3f} vs {bias_p}")
            if not 0.5 <= mse_c / mse_p <= 2.0:
                failures.append(f"T{which} {name} mse {mse_c:.3f} vs {mse_p}")
        mom, cop, md, gm = rows["mom"], rows["copas"], rows["md"], rows["gm"]
        if not (mom["mse"] < cop["mse"] and abs(mom["percent_bias"]) < abs(cop["percent_bias"])):
            failures.append(f"T{which} MOM does not beat COPAS")
        if not md["mse"] <= gm["mse"]:
            failures.append(f"T{which} MD mse above GM")
        lines.append(f"T{which} MD {md['mse_e3']:.3f}/{md['percent_bias']:.2f} "
                     f"GM {gm['mse_e3']:.3f} MOM {mom['mse_e3']:.3f} COPAS {cop['mse_e3']:.3f}")
    secs = time.perf_counter() - t0
    if secs >= 120:
        failures.append(f"runtime {secs:.1f}s")
    ok = not failures
    record("C7 Monte Carlo Tables 6-8", ok,
           f"{secs:.1f}s; " + "; ".join(lines) + ("" if ok else " FAILURES: " + ", ".join(failures)))
    assert ok, failures


def test_c8_table5():
    kappas = tuple(parse_ratio(l) for l in KAPPA_GRID_LABELS)
    cfg = SimulationConfig(sigma_delta=1.0, sigma_tau=1.0, replications=1000,
                           seed=TABLE_SEEDS[5], assumed_kappas=kappas)
    grid = run_kappa_misspecification(cfg)
    bias = grid.percent_bias
    diag = max(abs(bias[i, i]) for i in range(9))
    monotone = bool(np.all(np.diff(bias, axis=0) <= 0))
    ones = [KAPPA_GRID_LABELS.index(l) for l in ("1:1", "4:4", "9:9")]
    same = all(np.array_equal(bias[ones[0]], bias[k]) for k in ones[1:])
    ok = diag < 1.0 and monotone and same
    record("C8 Table 5", ok,
           f"R=1000, max |diagonal bias| {diag:.3f} (< 1.0), columns monotone {monotone}, "
           f"unit-ratio rows identical {same}")
    assert ok


def test_c9_dimensional_correctness():
    rng = np.random.default_rng(9)
    group = (ols_vertical, ols_horizontal, geometric_mean, moment_raw,
             moment_clamped, minimum_deviation)
    worst = 0.0
    for _ in range(500):
        s = random_stats(rng, fourth=True)
        c, d = rng.uniform(0.1, 10, 2)
        t = s.scaled(c, d)
        for fn in group:
            a, b = fn(s).beta1, fn(t).beta1
            worst = max(worst, abs(b - d / c * a) / abs(d / c * a))
        kappa = 10 ** rng.uniform(-2, 2)
        a, b = mle(s, kappa).beta1, mle(t, (d / c) ** 2 * kappa).beta1
        worst = max(worst, abs(b - d / c * a) / abs(d / c * a))
    s = SummaryStats.from_moments(1.0, 1.0, rho=0.5)
    c, d = 1.0, 10.0
    gap = abs(perpendicular(s.scaled(c, d)).beta1 - d / c * perpendicular(s).beta1)
    ok = worst <= 1e-9 and gap > 1e-3
    record("C9 Dimensional correctness", ok,
           f"500 instances, max rel deviation {worst:.1e}; PER counterexample "
           f"(c=1, d=10) off by {gap:.3f}")
    assert ok
