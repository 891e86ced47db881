"""The kernel c_{m,j} = sum_{s<=m} plus_{m-s} minus_s / (s + j), its majorants,
and the Beta-integral tail identity.

Three routes to c_{m,j} are available: the defining convolution, the
first-order recurrence c_{m,j} = theta/(m+j) * sum_{s<m} c_{s,j} with
c_{0,j} = 1/j, and the generating function
(1 - z)^(-theta) * int_0^1 (1 - x z)^theta x^(j-1) dx.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .exceptions import InvariantViolation, ValidationError
from .theta_binom import check_theta, minus_weights, plus_weights

CHAIN_SLACK = 1e-12
#: Errors below this fraction of the compared magnitudes count as exact zero.
NOISE_FLOOR = 1e-13
TAIL_RTOL = 1e-10
QUAD_ABS_TOL = 1e-13


@dataclass(frozen=True)
class KernelTable:
    """c[m, j - 1] for 0 <= m <= M and 1 <= j <= J."""

    theta: float
    values: np.ndarray

    def __post_init__(self):
        if np.any(self.values[0] != 1.0 / np.arange(1, self.J + 1)):
            raise ValidationError("row m = 0 must equal 1/j")

    @property
    def M(self):
        return self.values.shape[0] - 1

    @property
    def J(self):
        return self.values.shape[1]

    def __call__(self, m, j):
        return self.values[m, j - 1]


def _check_j(j):
    if j < 1:
        raise ValidationError(f"j must be >= 1, got {j}")


def _extended_weights(theta, M):
    # plus and minus weights carried in extended precision; the defining sum
    # cancels heavily (by about j^2 at theta = 2) so doubles are not enough
    k = np.arange(1, M + 1, dtype=np.longdouble)
    t = np.longdouble(theta)
    one = np.ones(1, dtype=np.longdouble)
    plus = np.concatenate([one, np.cumprod((k + t - 1) / k)])
    minus = np.concatenate([one, np.cumprod((k - 1 - t) / k)])
    return plus, minus


def c_by_convolution(theta, m, j):
    check_theta(theta)
    _check_j(j)
    w, v = _extended_weights(theta, m)
    s = np.arange(m + 1, dtype=np.longdouble)
    return float(np.sum(w[::-1] * v / (s + j)))


def c_by_recurrence(theta, M, j):
    """c_{0..M, j} from c_m = theta/(m+j) * (c_0 + ... + c_{m-1})."""
    check_theta(theta)
    _check_j(j)
    c = np.empty(M + 1)
    c[0] = 1.0 / j
    prefix = c[0]
    for m in range(1, M + 1):
        c[m] = theta * prefix / (m + j)
        prefix += c[m]
    return c


def table_by_recurrence(theta, M, J):
    return KernelTable(theta, np.column_stack([c_by_recurrence(theta, M, j) for j in range(1, J + 1)]))


def table_by_convolution(theta, M, J):
    """All c_{m,j}, one truncated product per column, in extended precision."""
    check_theta(theta)
    w, v = _extended_weights(theta, M)
    s = np.arange(M + 1, dtype=np.longdouble)
    values = np.column_stack([np.convolve(w, v / (s + j))[: M + 1] for j in range(1, J + 1)])
    values = values.astype(np.float64)
    values[0] = 1.0 / np.arange(1, J + 1)
    return KernelTable(theta, values)


def b_majorant(theta, m, j):
    """(theta / j^2) (1 + theta/j)^(m-1), solving b_m = (theta/j) sum_{s<m} b_s, b_0 = 1/j."""
    check_theta(theta)
    _check_j(j)
    if m < 1:
        raise ValidationError("b_majorant is defined for m >= 1")
    return theta / j**2 * (1.0 + theta / j) ** (m - 1)


def exp_majorant(theta, m, j):
    return theta / j**2 * math.exp(theta * m / j)


def beta_integral(j, theta):
    """int_0^1 (1 - y)^theta y^(j-1) dy = B(j, theta + 1) by the ratio recurrence in j."""
    check_theta(theta)
    _check_j(j)
    b = 1.0 / (theta + 1)
    for k in range(1, j):
        b *= k / (k + theta + 1)
    return b


def _beta_column(theta, J):
    b = np.empty(J)
    b[0] = 1.0 / (theta + 1)
    for k in range(1, J):
        b[k] = b[k - 1] * k / (k + theta + 1)
    return b


def generating_function(theta, j, x):
    """(1 - x)^(-theta) * int_0^1 (1 - t x)^theta t^(j-1) dt by quadrature."""
    val, _ = integrate.quad(lambda t: (1 - t * x) ** theta * t ** (j - 1), 0.0, 1.0,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return val / (1 - x) ** theta


@dataclass(frozen=True)
class Lemma2Report:
    theta: float
    M: int
    J: int
    violations: int
    worst_chain_excess: float
    route_error: float
    ii_constant: float
    ii_spread: dict = field(default_factory=dict)
    ii_profile: dict = field(default_factory=dict, repr=False)


def dyadic_from(j, M):
    """Powers of two m with j <= m <= M."""
    m = 1 << max(0, math.ceil(math.log2(j)))
    out = []
    while m <= M:
        out.append(m)
        m *= 2
    return out


def _spread(vals):
    if all(v == 0 for v in vals):
        return 1.0
    if min(vals) == 0:
        return math.inf
    return max(vals) / min(vals)


def check_lemma2(theta, M, J, stability_js=(10, 20, 40)):
    """Grid check of 0 <= c <= b <= (theta/j^2) e^(theta m/j) and of the
    asymptotic c ~ plus_m B(j, theta + 1).

    Raises InvariantViolation on any breach of the inequality chain beyond
    a 1e-12 relative slack.  The asymptotic's normalized error is reported
    as its grid maximum and, for each j in ``stability_js``, as the spread
    max/min along dyadic m >= j.
    """
    check_theta(theta)
    theta = float(theta)
    rec = table_by_recurrence(theta, M, J)
    conv = table_by_convolution(theta, M, J)
    scale = np.maximum(np.abs(rec.values), np.abs(conv.values))
    route_error = float(np.max(np.abs(rec.values - conv.values) / scale))

    m = np.arange(1, M + 1)[:, None]
    j = np.arange(1, J + 1)[None, :]
    c = rec.values[1:]
    b = theta / j**2 * (1.0 + theta / j) ** (m - 1)
    e = theta / j**2 * np.exp(theta * m / j)
    excess = np.concatenate([
        (-c).ravel(),
        ((c - b) / b).ravel(),
        ((b - e) / e).ravel(),
    ])
    worst = float(np.max(excess))
    violations = int(np.sum(excess > CHAIN_SLACK))
    if rec.values[0].min() < 0:
        violations += 1
    if violations:
        raise InvariantViolation(
            f"{violations} breaches of 0 <= c <= b <= (theta/j^2)e^(theta m/j) at theta={theta} "
            f"(worst relative excess {worst:.3e})"
        )

    beta = _beta_column(theta, J)
    plus = plus_weights(theta, M)
    main = plus[:, None] * beta[None, :]
    err = np.abs(rec.values - main)
    noise = err <= NOISE_FLOOR * (np.abs(rec.values) + np.abs(main))
    mm = np.arange(M + 1, dtype=np.float64)[:, None]
    with np.errstate(divide="ignore"):
        norm = np.where(noise, 0.0, err / (mm ** (theta - 2) * j ** (-theta) + mm**-2.0))
    ii_constant = float(np.max(norm[2:])) if M >= 2 else 0.0

    profile, spread = {}, {}
    for jj in stability_js:
        if jj > J:
            continue
        ms = dyadic_from(jj, M)
        vals = [float(norm[mv, jj - 1]) for mv in ms]
        profile[jj] = dict(zip(ms, vals))
        if len(vals) >= 2:
            spread[jj] = _spread(vals)
    return Lemma2Report(theta, M, J, violations, worst, route_error, ii_constant, spread, profile)


@dataclass(frozen=True)
class TailReport:
    theta: float
    j: int
    n: int
    sum: float
    integral: float
    bound: float
    terms: int

    @property
    def ratio(self):
        return self.sum / self.bound


def _tail_sum(theta, j, n):
    x = math.exp(-1.0 / n)
    K = max(64, math.ceil(40 * n) + int(theta) + 2)
    while True:
        v = minus_weights(theta, K)
        s = np.arange(K + 1)
        terms = v * np.exp(-(j + s) / n) / (j + s)
        acc = np.cumsum(terms)
        # beyond s > theta the terms keep one sign and shrink at least geometrically
        tail = np.abs(terms) / (1 - x)
        ok = (s > theta + 1) & (tail < 1e-16 * np.abs(acc))
        ok |= (s > theta) & (terms == 0)
        hit = np.flatnonzero(ok)
        if hit.size:
            stop = int(hit[0])
            return math.fsum(terms[: stop + 1]), stop + 1
        K *= 2


def tail_identity(theta, j, n):
    """sum_{k>=j} minus_{k-j} e^(-k/n) / k versus int_{1/n}^inf (1 - e^-y)^theta e^(-jy) dy.

    Also returns the bound e^(-j/n) / (j n^theta).  Raises InvariantViolation
    if the two routes differ by more than 1e-10 (1 + |sum|), and
    ValidationError if the quadrature does not converge.
    """
    check_theta(theta)
    _check_j(j)
    if n < 1:
        raise ValidationError("n must be >= 1")
    theta = float(theta)
    total, terms = _tail_sum(theta, j, n)

    lo = 1.0 / n
    hi = lo + 60.0 / j
    integrand = lambda y: (-math.expm1(-y)) ** theta * math.exp(-j * y)  # noqa: E731
    val, est = integrate.quad(integrand, lo, hi, epsabs=QUAD_ABS_TOL, epsrel=1e-13, limit=500)
    remainder = math.exp(-j * hi) / j
    if est > 10 * QUAD_ABS_TOL + 1e-12 * abs(val):
        raise ValidationError(f"quadrature did not converge (error estimate {est:.2e})")

    if abs(total - val) > TAIL_RTOL * (1 + abs(total)) + remainder:
        raise InvariantViolation(
            f"tail sum {total!r} and integral {val!r} disagree at theta={theta}, j={j}, n={n}"
        )
    bound = math.exp(-j / n) / (j * n**theta)
    return TailReport(theta, j, n, total, val, bound, terms)
