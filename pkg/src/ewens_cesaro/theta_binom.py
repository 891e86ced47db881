"""Rising factorials and the binomial series of (1 - z)^(-theta) and (1 - z)^theta.

Scalar functions are exact when ``theta`` is an ``int`` or ``Fraction`` and
floating point otherwise.  Array builders take an explicit ``exact`` flag.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .exceptions import ValidationError

#: Largest theta accepted in floating-point mode.
THETA_FLOAT_MAX = 50.0


def is_exact(x):
    return isinstance(x, Rational) and not isinstance(x, bool)


def check_theta(theta, exact=None):
    if isinstance(theta, bool) or not isinstance(theta, (int, float, Fraction, np.floating, np.integer)):
        raise ValidationError(f"theta must be a real number, got {theta!r}")
    if not theta > 0:
        raise ValidationError(f"theta must be positive, got {theta}")
    if exact is None:
        exact = is_exact(theta)
    if not exact and theta > THETA_FLOAT_MAX:
        raise ValidationError(f"theta={theta} exceeds {THETA_FLOAT_MAX} in floating-point mode")
    return theta


def _check_order(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValidationError(f"expected a nonnegative integer, got {n!r}")
    return int(n)


def pochhammer(theta, n):
    """Rising factorial theta (theta+1) ... (theta+n-1); equals 1 for n = 0."""
    check_theta(theta)
    n = _check_order(n)
    out = Fraction(1) if is_exact(theta) else 1.0
    for k in range(n):
        out *= theta + k
    if is_exact(theta) and out.denominator == 1:
        return int(out)
    return out


def coeff_plus(theta, n):
    """[z^n] (1 - z)^(-theta) = pochhammer(theta, n) / n!, by the ratio recurrence."""
    check_theta(theta)
    n = _check_order(n)
    a = Fraction(1) if is_exact(theta) else 1.0
    for k in range(1, n + 1):
        a = a * (theta + k - 1) / k
    return a


def coeff_minus(theta, n):
    """[z^n] (1 - z)^theta."""
    check_theta(theta)
    n = _check_order(n)
    c = Fraction(1) if is_exact(theta) else 1.0
    for k in range(1, n + 1):
        c = c * (k - 1 - theta) / k
    return c


def _ratio_products(theta, N, shift, exact):
    # a_k = a_{k-1} * (k + shift) / k with a_0 = 1
    if exact:
        theta = Fraction(theta)
        out = np.empty(N + 1, dtype=object)
        a = Fraction(1)
        out[0] = a
        for k in range(1, N + 1):
            a = a * (k + shift(theta)) / k
            out[k] = a
        return out
    k = np.arange(1, N + 1, dtype=np.float64)
    out = np.empty(N + 1)
    out[0] = 1.0
    np.cumprod((k + shift(float(theta))) / k, out=out[1:])
    return out


def plus_weights(theta, N, exact=False):
    """Array of [z^k] (1 - z)^(-theta) for k = 0..N."""
    check_theta(theta, exact)
    return _ratio_products(theta, _check_order(N), lambda t: t - 1, exact)


def minus_weights(theta, N, exact=False):
    """Array of [z^k] (1 - z)^theta for k = 0..N."""
    check_theta(theta, exact)
    return _ratio_products(theta, _check_order(N), lambda t: -1 - t, exact)


@dataclass(frozen=True)
class ThetaWeights:
    theta: float
    plus: np.ndarray
    minus: np.ndarray

    @property
    def length(self):
        return self.plus.shape[0]


def build_weights(theta, N, exact=False):
    return ThetaWeights(theta, plus_weights(theta, N, exact), minus_weights(theta, N, exact))


def integer_theta(theta):
    """Return theta as an int when it is a small positive integer, else None."""
    if float(theta).is_integer() and 1 <= theta <= 16:
        return int(theta)
    return None


def times_plus(a, theta, size=None):
    """First ``size`` coefficients of a(z) * (1 - z)^(-theta).

    Integer theta is handled by repeated prefix sums, anything else by a
    direct truncated convolution with the weights.
    """
    from . import _kernels

    a = np.asarray(a)
    size = a.shape[0] if size is None else size
    k = integer_theta(theta)
    if k is not None and a.dtype != object:
        out = np.zeros(size, dtype=np.result_type(a, np.float64))
        m = min(size, a.shape[0])
        out[:m] = a[:m]
        for _ in range(k):
            np.cumsum(out, out=out)
        return out
    exact = a.dtype == object
    return _kernels.conv(a, plus_weights(theta, max(size - 1, 0), exact=exact), size)


def plus_asymptotic_defect(theta, n):
    """|plus_n * Gamma(theta) / n^(theta - 1) - 1|, which is O(1/n)."""
    w = plus_weights(theta, n)[n]
    return abs(w * math.gamma(theta) / float(n) ** (theta - 1) - 1.0)
