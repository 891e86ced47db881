"""Acceptance criteria, one test each.  Every test appends a PASS/FAIL line
that is printed in the terminal summary (and directly, under ``-s``)."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from ewens_cesaro import cesaro, ewens, kernel, oracle

pytestmark = pytest.mark.acceptance


def record(number, title, ok, detail, elapsed, limit):
    in_time = elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] criterion {number}: {title} ({detail}; {elapsed:.2f}s of {limit:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok and in_time


def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for theta in (0.5, 1.0, 2.0):
        for n in range(1, 9):
            for seed in range(50):
                spec = ewens.random_disk(n, seed)
                worst = max(worst, abs(ewens.mean_value(spec, theta) - oracle.brute_mean(spec, theta)))
    elapsed = time.perf_counter() - start
    assert record(1, "series mean equals cycle-type enumeration", worst <= 1e-10,
                  f"max |diff| = {worst:.2e}, tol 1e-10", elapsed, 5)


def test_criterion_2_closed_form_family():
    start = time.perf_counter()
    worst = 0.0
    for u in (0.0, 0.3, 1.0):
        for theta in (0.5, 1.0, 2.0):
            for n in (10, 100, 300):
                # rising-factorial ratio as a running product, no overflow
                closed = math.prod((u * theta + k) / (theta + k) for k in range(n))
                got = ewens.mean_value(ewens.constant(n, u), theta)
                worst = max(worst, abs(got - closed))
    elapsed = time.perf_counter() - start
    assert record(2, "constant family matches pochhammer ratio", worst <= 1e-11,
                  f"max |diff| = {worst:.2e}, tol 1e-11", elapsed, 2)


THM3_FAMILIES = {
    "constant(0.5)": lambda n: ewens.constant(n, 0.5),
    "unimodular(1)": lambda n: ewens.unimodular(n, 1.0),
    "zero_on{1,2}": lambda n: ewens.as_float(ewens.zero_on(n, [1, 2])),
}


def test_criterion_3_mean_value_bounded_ratio():
    start = time.perf_counter()
    grid = (50, 100, 200, 400, 800, 1600)
    failures, worst_growth = [], 0.0
    for name, builder in THM3_FAMILIES.items():
        for theta in (1.0, 2.0):
            reps = [ewens.thm3_residual(builder(n), theta, 2.0) for n in grid]
            base = reps[0].ratio
            growth = max(r.ratio for r in reps) / base if base > 0 else 1.0
            worst_growth = max(worst_growth, growth)
            monotone = all(b.residual <= 2 * a.residual for a, b in zip(reps, reps[1:]))
            if not (all(r.ratio <= 8 * base for r in reps) and monotone):
                failures.append(f"{name}, theta={theta:g}")
    elapsed = time.perf_counter() - start
    detail = f"worst ratio growth {worst_growth:.2f}x of cap 8x"
    if failures:
        detail += "; failing: " + ", ".join(failures)
    assert record(3, "mean-value residual over mu_n(p) bounded", not failures, detail, elapsed, 30)


def test_criterion_4_abel_cesaro_bounded_ratio():
    start = time.perf_counter()
    grid = (100, 400, 1600)
    sources = {
        "alternating": lambda n, theta: cesaro.alternating(),
        "exp_l zero_on{1}": lambda n, theta: cesaro.exp_l(ewens.zero_on(n, [1]), theta),
    }
    cases = []
    for name, build in sources.items():
        for theta in (1.0, 2.0):
            reps = [cesaro.thm1_residual(build(n, theta), theta, n) for n in grid]
            ratios = [r.ratio for r in reps]
            spread = max(ratios) / min(ratios) if min(ratios) > 0 else math.inf
            witness_ok = all(r.witness <= 1e-12 * r.majorant for r in reps)
            ok = spread < 4 and max(ratios) <= 10 and witness_ok
            cases.append((ok, f"{name} theta={theta:g}: spread {spread:.3g}"))
    elapsed = time.perf_counter() - start
    ok = all(c[0] for c in cases)
    detail = "; ".join(f"{d} {'ok' if c else 'FAIL'}" for c, d in cases)
    assert record(4, "Abel/Cesaro comparison ratio stable within 4x", ok, detail, elapsed, 60)


def test_criterion_5_classical_series():
    start = time.perf_counter()
    alt = cesaro.tauber_conditions(cesaro.alternating(), 1.0, 100_000)
    lin = cesaro.tauber_conditions(cesaro.alternating_linear(), 0.0, 100_000)
    elapsed = time.perf_counter() - start
    checks = {
        "alt Abel": abs(alt.abel_limit - 0.5) <= 1e-4,
        "alt Cesaro": abs(alt.cesaro_limit - 0.5) <= 1e-4,
        "alt second": abs(alt.s_ratio[-1]) < 1e-3,
        "alt verdict": alt.summable,
        "lin Abel": abs(lin.abel_limit + 0.25) <= 1e-4,
        "lin second": abs(lin.s_ratio[-1]) > 0.1,
        "lin verdict": lin.verdict == "not (C,0) summable",
    }
    detail = (f"alt A={alt.abel_limit.real:.7f} C={alt.cesaro_limit.real:.7f} "
              f"second={abs(alt.s_ratio[-1]):.1e}; lin A={lin.abel_limit.real:.7f} "
              f"second={abs(lin.s_ratio[-1]):.3g}")
    bad = [k for k, v in checks.items() if not v]
    if bad:
        detail += "; failing: " + ", ".join(bad)
    assert record(5, "Tauberian verdicts on classical series", not bad, detail, elapsed, 20)


def test_criterion_6_kernel_grid():
    start = time.perf_counter()
    worst_route, worst_spread, violations = 0.0, 0.0, 0
    for theta in (0.5, 1.0, 2.0):
        rep = kernel.check_lemma2(theta, 300, 100, stability_js=(10, 20, 40))
        violations += rep.violations
        worst_route = max(worst_route, rep.route_error)
        assert set(rep.ii_spread) == {10, 20, 40}
        worst_spread = max(worst_spread, *rep.ii_spread.values())
    elapsed = time.perf_counter() - start
    ok = violations == 0 and worst_route <= 1e-12 and worst_spread < 8
    detail = (f"violations {violations}, route error {worst_route:.1e} (tol 1e-12), "
              f"worst dyadic spread {worst_spread:.2f} (cap 8)")
    assert record(6, "kernel inequality chain, routes and asymptotic", ok, detail, elapsed, 30)


def test_criterion_7_tail_identity():
    start = time.perf_counter()
    worst, ratios = 0.0, []
    for theta in (1.0, 2.0):
        for j in (1, 5, 50):
            for n in (1, 10, 100):
                r = kernel.tail_identity(theta, j, n)
                worst = max(worst, abs(r.sum - r.integral) / (1 + abs(r.sum)))
                if j > n / 2:
                    ratios.append(r.ratio)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and min(ratios) > 0 and max(ratios) <= 2
    detail = f"max scaled diff {worst:.1e} (tol 1e-10), sum/bound in [{min(ratios):.3f}, {max(ratios):.3f}] (cap 2)"
    assert record(7, "tail sum equals Beta-type integral", ok, detail, elapsed, 10)


def test_criterion_8_normalization():
    start = time.perf_counter()
    bad = []
    for theta in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5, 3)):
        for n in range(1, 21):
            total = sum(oracle.ewens_weight(t, theta) for t in oracle.partitions(n))
            if total != 1:
                bad.append((theta, n))
    elapsed = time.perf_counter() - start
    assert record(8, "exact Ewens weights sum to one", not bad,
                  f"{len(bad)} of 80 (theta, n) pairs off", elapsed, 10)


def test_criterion_9_monte_carlo():
    start = time.perf_counter()
    spec = ewens.constant(50, 0.5)
    est, se = oracle.mc_mean(spec, 1.0, 100_000, seed=2024)
    exact = complex(ewens.mean_value(spec, 1.0))
    z = abs(est - exact) / se
    first = oracle.crp_cycle_types(50, 1.0, 100_000, seed=2024)
    again = oracle.crp_cycle_types(50, 1.0, 100_000, seed=2024)
    est2, se2 = oracle.mc_mean(spec, 1.0, 100_000, seed=2024)
    reproducible = first.tobytes() == again.tobytes() and (est, se) == (est2, se2)
    elapsed = time.perf_counter() - start
    ok = z <= 3 and reproducible
    detail = f"z = {z:.2f} (cap 3), reproducible {reproducible}"
    assert record(9, "Monte-Carlo mean agrees with series mean", ok, detail, elapsed, 10)
