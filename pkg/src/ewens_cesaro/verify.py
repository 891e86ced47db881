"""n-grid sweeps with PASS/FAIL verdicts, shared by the CLI and the test suite."""

from dataclasses import dataclass, field

from . import cesaro, ewens, kernel
from .thresholds import resolve


@dataclass
class Verification:
    theorem: str
    rows: list
    checks: dict
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())


def geometric_ns(start, stop, factor):
    out = []
    n = start
    while n <= stop:
        out.append(int(n))
        n *= factor
    return out


def _spread(values):
    lo, hi = min(values), max(values)
    if hi == 0:
        return 1.0
    return hi / lo if lo > 0 else float("inf")


def verify_thm3(builder, theta, p, grid, thresholds=None):
    """Mean-value asymptotics over an n-grid; ``builder(n)`` returns a spec."""
    th = resolve(thresholds)
    reports = [ewens.thm3_residual(builder(n), theta, p) for n in grid]
    rows = [
        {"n": r.n, "mean": r.mean, "asymptotic": r.asymptotic, "mu": r.mu,
         "residual": r.residual, "ratio": r.ratio}
        for r in reports
    ]
    first = reports[0].ratio
    growth = all(r.ratio <= th["thm3_ratio_growth"] * first for r in reports)
    slack = th["thm3_monotone_slack"]
    monotone = all(b.residual <= slack * a.residual for a, b in zip(reports, reports[1:]))
    return Verification("thm3", rows, {"ratio_growth": growth, "residual_monotone": monotone},
                        {"theta": theta, "p": p})


def verify_thm1(source, theta, grid, j_cap_factor=cesaro.DEFAULT_J_CAP_FACTOR, thresholds=None):
    """Abel/Cesaro comparison bound; ``source`` is a stream or ``n -> stream``."""
    th = resolve(thresholds)
    reports = []
    for n in grid:
        stream = source(n) if callable(source) else source
        reports.append(cesaro.thm1_residual(stream, theta, n, j_cap_factor))
    rows = [
        {"n": r.n, "cesaro": r.cesaro, "abel": r.abel, "drift": r.drift, "lhs": r.lhs,
         "majorant": r.majorant, "ratio": r.ratio, "j_cap": r.j_cap, "witness": r.witness}
        for r in reports
    ]
    ratios = [r.ratio for r in reports]
    checks = {
        "ratio_bounded": max(ratios) <= th["thm1_ratio_max"],
        "ratio_spread": _spread(ratios) < th["thm1_ratio_spread"],
        "tail_witness": all(r.witness <= cesaro.WITNESS_RTOL * r.majorant for r in reports),
    }
    return Verification("thm1", rows, checks, {"theta": theta, "ratio_spread": _spread(ratios)})


def verify_thm2(stream, p, N, n0=100, thresholds=None):
    th = resolve(thresholds)
    rep = cesaro.tauber_conditions(stream, p, N, n0=n0, tol=th["tauber_tol"])
    rows = [
        {"n": n, "abel": a, "cesaro": c, "s_ratio": s}
        for n, a, c, s in zip(rep.grid, rep.abel, rep.cesaro, rep.s_ratio)
    ]
    details = {
        "p": p,
        "verdict": rep.verdict,
        "abel_limit": rep.abel_limit,
        "cesaro_limit": rep.cesaro_limit,
        "abel_converges": rep.abel_converges,
        "second_condition": rep.second_condition,
        "cesaro_converges": rep.cesaro_converges,
        "summable": rep.summable,
    }
    return Verification("thm2", rows, {"equivalence_consistent": rep.consistent}, details)


def verify_lemma2(theta, M, J, stability_js=(10, 20, 40), thresholds=None):
    th = resolve(thresholds)
    rep = kernel.check_lemma2(theta, M, J, stability_js)
    rows = [
        {"j": j, "m": m, "normalized_error": v}
        for j, prof in rep.ii_profile.items()
        for m, v in prof.items()
    ]
    checks = {
        "chain": rep.violations == 0,
        "routes_agree": rep.route_error <= 1e-12,
        "ii_stable": all(s < th["lemma2_ii_spread"] for s in rep.ii_spread.values()),
    }
    details = {
        "theta": theta, "M": M, "J": J, "violations": rep.violations,
        "route_error": rep.route_error, "ii_constant": rep.ii_constant,
        "ii_spread": {str(k): v for k, v in rep.ii_spread.items()},
    }
    return Verification("lemma2", rows, checks, details)


def verify_tail(thetas, js, ns, thresholds=None):
    th = resolve(thresholds)
    rows, ratios = [], []
    for theta in thetas:
        for j in js:
            for n in ns:
                r = kernel.tail_identity(theta, j, n)
                far = j > n / 2
                rows.append({"theta": theta, "j": j, "n": n, "sum": r.sum, "integral": r.integral,
                             "bound": r.bound, "ratio": r.ratio if far else None})
                if far:
                    ratios.append(r.ratio)
    checks = {"bounded": max(ratios, default=0.0) <= th["tail_ratio_max"]}
    return Verification("tail", rows, checks, {"max_ratio": max(ratios, default=0.0)})
