"""Mean values of multiplicative functions under the Ewens measure.

A multiplicative function on S_n is fixed by its cycle values
fhat(1..n).  Its Ewens mean is M_n = N_n / plus_n where N_m are the
coefficients of exp(theta * sum_j fhat(j) z^j / j), computed here as
exp(theta * L_n(z)) * (1 - z)^(-theta) with L_n(z) = sum_{j<=n} (fhat(j)-1) z^j / j.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import series as ser
from ._kernels import conv
from .exceptions import CrossCheckError, ValidationError
from .theta_binom import check_theta, is_exact, plus_weights

CROSS_CHECK_RTOL = 1e-9
UNIT_DISK_SLACK = 1e-12


@dataclass(frozen=True)
class MultiplicativeSpec:
    """Cycle values fhat(1), ..., fhat(n); fhat(j) = 1 is implied for j > n."""

    fhat: np.ndarray
    family: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        f = np.asarray(self.fhat)
        if f.ndim != 1 or f.shape[0] == 0:
            raise ValidationError("fhat must be a nonempty 1-D array")
        if f.dtype != object:
            f = f.astype(np.complex128)
        object.__setattr__(self, "fhat", f)

    @property
    def n(self):
        return self.fhat.shape[0]

    @property
    def exact(self):
        return self.fhat.dtype == object

    def in_unit_disk(self):
        return bool(np.all(np.abs(self.fhat.astype(np.complex128)) <= 1 + UNIT_DISK_SLACK))

    def extended(self, order):
        """fhat(1..order) with the fhat(j) = 1 convention beyond n."""
        if order <= self.n:
            return self.fhat[:order]
        pad = [1] * (order - self.n)
        return np.concatenate([self.fhat, np.array(pad, dtype=self.fhat.dtype)])


def constant(n, u):
    return MultiplicativeSpec(np.full(n, u, dtype=object if is_exact(u) else np.complex128),
                              {"family": "constant", "u": u})


def unimodular(n, tau):
    return MultiplicativeSpec(np.full(n, np.exp(1j * tau)), {"family": "unimodular", "tau": tau})


def zero_on(n, lengths):
    """fhat vanishes on the given cycle lengths and is 1 elsewhere."""
    f = np.array([1] * n, dtype=object)
    for j in lengths:
        if not 1 <= j <= n:
            raise ValidationError(f"cycle length {j} outside 1..{n}")
        f[j - 1] = 0
    return MultiplicativeSpec(f, {"family": "zero_on", "set": sorted(lengths)})


def random_disk(n, seed):
    """fhat uniform in the closed unit disk, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.random(n))
    phi = 2 * np.pi * rng.random(n)
    return MultiplicativeSpec(r * np.exp(1j * phi), {"family": "random_disk", "seed": seed})


def as_float(spec):
    if not spec.exact:
        return spec
    return MultiplicativeSpec(spec.fhat.astype(np.complex128), spec.family)


def _exact_real(spec):
    return spec.exact and all(is_exact(v) for v in spec.fhat)


def l_series(spec, order):
    """L_n(z) = sum_{j=1}^n (fhat(j) - 1) z^j / j, padded with zeros to ``order``."""
    if order < spec.n:
        raise ValidationError(f"order {order} is below n = {spec.n}")
    if _exact_real(spec):
        c = np.array([0] * (order + 1), dtype=object)
        for j in range(1, spec.n + 1):
            c[j] = Fraction(spec.fhat[j - 1] - 1, j)
        return ser.TruncatedSeries(c)
    f = as_float(spec).fhat
    c = np.zeros(order + 1, dtype=np.complex128)
    c[1 : spec.n + 1] = (f - 1) / np.arange(1, spec.n + 1)
    return ser.TruncatedSeries(c)


def l_value(spec, x):
    """L_n(x) by direct polynomial evaluation."""
    return np.polynomial.polynomial.polyval(x, l_series(as_float(spec), spec.n).coeffs)


def _majorant_weights(spec, theta, N):
    # |coefficients of theta*sum fhat z^j/j| <= theta*M/j, so |N_k| <= [z^k](1-z)^(-theta*M)
    m = max(1.0, float(np.max(np.abs(spec.fhat.astype(np.complex128)))))
    return plus_weights(theta * m, N)


def big_n_coeffs(spec, theta, N=None, exact=None):
    """N_0..N_N, the coefficients of exp(theta * sum_j fhat(j) z^j / j).

    Computed as exp(theta L_n) (1 - z)^(-theta) and cross-checked against a
    direct exponential of the full log-series.  Exact mode (rational theta
    and rational real fhat) compares the routes for equality.
    """
    check_theta(theta)
    N = spec.n if N is None else N
    if N < spec.n:
        raise ValidationError(f"N = {N} is below n = {spec.n}")
    if exact is None:
        exact = is_exact(theta) and _exact_real(spec)
    if exact:
        if not (is_exact(theta) and _exact_real(spec)):
            raise ValidationError("exact mode needs rational theta and rational real fhat")
        theta = Fraction(theta)
    else:
        spec = as_float(spec)
        theta = float(theta)

    lhs = ser.exp_series(ser.scale(l_series(spec, N), theta))
    route_a = ser.mul(lhs, ser.TruncatedSeries(plus_weights(theta, N, exact=exact)))

    full = spec.extended(N)
    if exact:
        g = np.array([0] + [theta * Fraction(full[j - 1], j) for j in range(1, N + 1)], dtype=object)
    else:
        g = np.concatenate([[0.0], theta * full / np.arange(1, N + 1)])
    route_b = ser.exp_series(ser.TruncatedSeries(g))

    if exact:
        if any(x != y for x, y in zip(route_a.coeffs, route_b.coeffs)):
            raise CrossCheckError("exact routes for N_m disagree")
    else:
        scale_k = _majorant_weights(spec, theta, N)
        err = np.abs(route_a.coeffs - route_b.coeffs) / scale_k
        worst = int(np.argmax(err))
        if err[worst] > CROSS_CHECK_RTOL:
            raise CrossCheckError(
                f"N_m routes disagree at m={worst}: relative error {err[worst]:.3e} > {CROSS_CHECK_RTOL:g}"
            )
    return route_a


def mean_value(spec, theta, exact=None):
    """Ewens mean M_n(f) = N_n / plus_n."""
    coeffs = big_n_coeffs(spec, theta, spec.n, exact=exact)
    weight = plus_weights(theta, spec.n, exact=coeffs.exact)[spec.n]
    return coeffs[spec.n] / weight


def closed_form_constant_mean(u, theta, n):
    """M_n for fhat == u: pochhammer(u theta, n) / pochhammer(theta, n), as a product."""
    out = 1.0
    for k in range(n):
        out *= (u * theta + k) / (theta + k)
    return out


def mu_n(spec, p):
    """Power mean ((1/n) sum |fhat(k) - 1|^p)^(1/p)."""
    if not p > 0:
        raise ValidationError(f"p must be positive, got {p}")
    d = np.abs(spec.fhat.astype(np.complex128) - 1)
    return float(np.mean(d**p) ** (1.0 / p))


@dataclass(frozen=True)
class MeanReport:
    n: int
    theta: float
    p: float
    mean: complex
    n_coeff: complex
    weight: float
    asymptotic: complex
    mu: float
    residual: float
    ratio: float


def check_thm3_hypotheses(spec, theta, p):
    if not p > max(1.0, 1.0 / theta):
        raise ValidationError(f"need p > max(1, 1/theta) = {max(1.0, 1.0 / theta):g}, got p = {p}")
    if not spec.in_unit_disk():
        raise ValidationError("mean-value asymptotics need |fhat(j)| <= 1 for every j")


def thm3_residual(spec, theta, p):
    """Compare M_n(f) with exp(theta * sum_{k<=n} (fhat(k) - 1) / k), gauged by mu_n(p).

    ``ratio`` is residual / mu; it is 0 when both vanish and ``inf`` when
    only mu does.
    """
    check_theta(theta)
    theta = float(theta)
    check_thm3_hypotheses(spec, theta, p)
    spec = as_float(spec)
    coeffs = big_n_coeffs(spec, theta, spec.n)
    weight = float(plus_weights(theta, spec.n)[spec.n])
    n_coeff = complex(coeffs[spec.n])
    mean = n_coeff / weight
    asym = complex(np.exp(theta * np.sum((spec.fhat - 1) / np.arange(1, spec.n + 1))))
    mu = mu_n(spec, p)
    residual = abs(mean - asym)
    if mu > 0:
        ratio = residual / mu
    else:
        ratio = 0.0 if residual == 0 else math.inf
    return MeanReport(spec.n, theta, p, mean, n_coeff, weight, asym, mu, residual, ratio)


def s_theta_of_exp_l(spec, theta, M):
    """S_theta(exp(theta L_n); m) for m = 0..M via theta * sum_k (fhat(k) - 1) N_{m-k}."""
    spec = as_float(spec)
    big_n = big_n_coeffs(spec, theta, max(M, spec.n)).coeffs[: M + 1]
    d = np.zeros(M + 1, dtype=np.complex128)
    top = min(M, spec.n)
    d[1 : top + 1] = spec.fhat[:top] - 1
    return theta * conv(d, big_n, M + 1)
