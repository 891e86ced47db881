"""Pinned PASS/FAIL thresholds for the bounded-ratio checks.

The asymptotic statements carry unspecified O-constants, so the tool fixes
its own.  Bump ``VERSION`` whenever a value changes.
"""

VERSION = 1

DEFAULTS = {
    # ratio residual/mu may not exceed this multiple of its value at the first grid point
    "thm3_ratio_growth": 8.0,
    # residual(n_next) <= slack * residual(n)
    "thm3_monotone_slack": 2.0,
    # lhs/majorant cap and max/min spread across the n-grid
    "thm1_ratio_max": 10.0,
    "thm1_ratio_spread": 4.0,
    # max/min of the normalized asymptotic error along dyadic m >= j
    "lemma2_ii_spread": 8.0,
    # tail sum over exp(-j/n)/(j n^theta) for j > n/2
    "tail_ratio_max": 2.0,
    # Cauchy closeness for limit certificates
    "tauber_tol": 1e-3,
    # |estimate - exact| / stderr
    "mc_z_max": 3.0,
}


def resolve(overrides=None):
    table = dict(DEFAULTS)
    for key, value in (overrides or {}).items():
        if key not in table:
            raise KeyError(f"unknown threshold {key!r}; known: {sorted(table)}")
        table[key] = float(value)
    return table
