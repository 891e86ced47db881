"""Truncated power series and certified evaluation of coefficient streams."""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import ValidationError

#: Default hard cap on the number of terms :func:`eval_tail` may sum.
MAX_TAIL_TERMS = 1 << 24


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_N of a power series known modulo z^(N+1)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 1 or c.shape[0] == 0:
            raise ValidationError("a truncated series needs a nonempty 1-D coefficient array")
        if c.dtype != object and not np.iscomplexobj(c):
            c = c.astype(np.float64)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def exact(self):
        return self.coeffs.dtype == object

    def truncate(self, order):
        if order > self.order:
            raise ValidationError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.coeffs.shape[0]


def identity(order, exact=False):
    c = np.array([0] * (order + 1), dtype=object) if exact else np.zeros(order + 1)
    c[0] = 1
    return TruncatedSeries(c)


def log_series(order, scale=1.0):
    """scale * sum_{j>=1} z^j / j, i.e. -scale * log(1 - z)."""
    j = np.arange(1, order + 1, dtype=np.float64)
    return TruncatedSeries(np.concatenate([[0.0], scale / j]))


def add(a, b):
    n = min(a.order, b.order) + 1
    return TruncatedSeries(a.coeffs[:n] + b.coeffs[:n])


def scale(a, factor):
    return TruncatedSeries(a.coeffs * factor)


def mul(a, b):
    """Cauchy product truncated at the smaller of the two orders."""
    n = min(a.order, b.order) + 1
    return TruncatedSeries(_kernels.conv(a.coeffs, b.coeffs, n))


def exp_series(g):
    """exp(g) through the order of g; requires g_0 = 0.

    Uses h_0 = 1 and m h_m = sum_{j=1}^m j g_j h_{m-j}, skipping the zero
    tail of g so a degree-d polynomial costs O(N d).
    """
    if g.coeffs[0] != 0:
        raise ValidationError("exp_series needs a zero constant term")
    return TruncatedSeries(_kernels.exp_coeffs(g.coeffs, g.order + 1))


def derivative_shift(a):
    """Coefficients of z a'(z): k a_k at index k."""
    if a.exact:
        return TruncatedSeries(np.array([k * c for k, c in enumerate(a.coeffs)], dtype=object))
    return TruncatedSeries(np.arange(len(a)) * a.coeffs)


@dataclass(frozen=True)
class Envelope:
    """Bound |a_k| <= scale * (1 + k)^degree valid for every k >= 0."""

    scale: float
    degree: float = 0.0

    def tail(self, start, x):
        """Upper bound on sum_{k >= start} |a_k| x^k, or inf when not certifiable."""
        if self.scale == 0 or x == 0:
            return 0.0 if start > 0 or self.scale == 0 else self.scale
        rho = x * ((start + 2.0) / (start + 1.0)) ** self.degree
        if rho >= 1.0:
            return math.inf
        log_b = (
            math.log(self.scale)
            + self.degree * math.log1p(start)
            + start * math.log(x)
            - math.log1p(-rho)
        )
        return math.exp(log_b) if log_b < 700 else math.inf


class CoefficientStream:
    """Replayable sequence a_0, a_1, ... with a growth envelope.

    ``generator(count)`` must return the first ``count`` coefficients and
    be deterministic; results are cached and extended geometrically.
    ``length`` marks a finite polynomial (coefficients vanish from there on).
    """

    def __init__(self, generator, envelope, length=None, label=""):
        self._generator = generator
        self.envelope = envelope
        self.length = length
        self.label = label
        self._cache = np.zeros(0)

    @classmethod
    def from_array(cls, coeffs, label="polynomial"):
        c = np.asarray(coeffs)
        bound = float(np.max(np.abs(c))) if c.size and c.dtype != object else 0.0
        if c.dtype == object and c.size:
            bound = float(max(abs(v) for v in c))
        return cls(lambda count: c[:count], Envelope(bound), length=c.shape[0], label=label)

    @classmethod
    def from_function(cls, fn, envelope, label=""):
        """Stream from a vectorised closed form ``fn(k_array)``."""
        return cls(lambda count: fn(np.arange(count)), envelope, label=label)

    def coeffs(self, count):
        count = int(count)
        if self.length is not None:
            head = np.asarray(self._generator(min(count, self.length)))
            if head.shape[0] < count:
                pad = np.zeros(count - head.shape[0], dtype=head.dtype)
                if head.dtype == object:
                    pad = np.array([0] * (count - head.shape[0]), dtype=object)
                head = np.concatenate([head, pad])
            return head
        cache = self._cache
        if cache.shape[0] < count:
            cache = np.asarray(self._generator(max(count, 2 * cache.shape[0])))
            self._cache = cache
        return cache[:count]

    def __repr__(self):
        return f"CoefficientStream({self.label!r})"


def _as_stream(source):
    if isinstance(source, CoefficientStream):
        return source
    if isinstance(source, TruncatedSeries):
        return CoefficientStream.from_array(source.coeffs)
    return CoefficientStream.from_array(np.asarray(source))


def terms_needed(envelope, x, tol, cap=MAX_TAIL_TERMS):
    """Smallest-ish K with envelope.tail(K, x) < tol, or None past ``cap``."""
    if envelope.tail(0, x) < tol:
        return 0
    hi = 16
    while envelope.tail(hi, x) >= tol:
        hi *= 2
        if hi > 2 * cap:
            return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if envelope.tail(mid, x) < tol:
            hi = mid
        else:
            lo = mid
    return hi if hi <= cap else None


def eval_tail(coeff_source, x, tol=1e-15, cap=MAX_TAIL_TERMS):
    """Sum a_k x^k with the neglected tail certified below ``tol``.

    Finite polynomials are evaluated exactly.  Raises ValidationError when
    the envelope cannot certify the tail within ``cap`` terms.
    """
    if not 0 <= x < 1:
        raise ValidationError(f"evaluation point must lie in [0, 1), got {x}")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    stream = _as_stream(coeff_source)
    if stream.length is not None:
        count = stream.length
    else:
        count = terms_needed(stream.envelope, x, tol, cap)
        if count is None:
            raise ValidationError(
                f"tail of {stream.label or 'stream'} not below {tol:g} within {cap} terms at x={x}"
            )
    a = stream.coeffs(count)
    if a.dtype == object:
        return sum(c * x**k for k, c in enumerate(a))
    powers = np.exp(np.arange(count) * math.log(x)) if x > 0 else (np.arange(count) == 0) * 1.0
    return np.sum(a * powers)[()]
