"""Cesaro means with real parameter, the weighted sums S_theta(f; n), and
numerical checks of the Abel/Cesaro comparison bound and its Tauberian
corollary.

Throughout, the (C, p) mean of sum a_k at n is

    C_n = (1 / plus_n) * sum_{k<=n} a_k plus_{n-k},     theta = p + 1,

with plus_k = [z^k] (1 - z)^(-theta), and S_theta(f; n) = sum_{k<=n} k a_k plus_{n-k}.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import ewens
from . import series as ser
from .exceptions import ValidationError
from .series import CoefficientStream, Envelope
from .theta_binom import check_theta, is_exact, minus_weights, plus_weights, times_plus

SummabilityInput = CoefficientStream

#: Closeness tolerance for the finite limit certificate in tauber_conditions.
LIMIT_TOL = 1e-3
DEFAULT_J_CAP_FACTOR = 40.0
WITNESS_RTOL = 1e-12
ABEL_TOL = 1e-15


# -- input builders ----------------------------------------------------------

def alternating():
    """a_k = (-1)^k; f(x) = 1 / (1 + x)."""
    return SummabilityInput.from_function(
        lambda k: np.where(k % 2 == 0, 1.0, -1.0), Envelope(1.0), label="alternating"
    )


def alternating_linear():
    """a_k = (-1)^k k; f(x) = -x / (1 + x)^2."""
    return SummabilityInput.from_function(
        lambda k: np.where(k % 2 == 0, 1.0, -1.0) * k, Envelope(1.0, 1.0), label="alternating_linear"
    )


def geometric(r):
    """a_k = r^k with |r| <= 1."""
    if abs(r) > 1:
        raise ValidationError("geometric input needs |r| <= 1")
    return SummabilityInput.from_function(
        lambda k: np.power(r, k.astype(np.float64)), Envelope(1.0), label=f"geometric({r})"
    )


def polynomial(coeffs, label="polynomial"):
    return SummabilityInput.from_array(coeffs, label=label)


def exp_l(spec, theta):
    """Coefficients of exp(theta L_n(z)) for a multiplicative spec.

    The envelope is the Cauchy bound on the unit circle,
    exp(theta * sum_j |fhat(j) - 1| / j).
    """
    check_theta(theta)
    theta = float(theta)
    spec = ewens.as_float(spec)
    l = ewens.l_series(spec, spec.n).coeffs
    bound = math.exp(theta * float(np.sum(np.abs(l))))

    def generate(count):
        g = np.zeros(max(count, spec.n + 1), dtype=np.complex128)
        g[: spec.n + 1] = theta * l
        return ser.exp_series(ser.TruncatedSeries(g)).coeffs[:count]

    return SummabilityInput(generate, Envelope(bound), label=f"exp_l({spec.family or 'explicit'})")


# -- core sums ---------------------------------------------------------------

def _theta_of(p):
    if not p > -1:
        raise ValidationError(f"Cesaro parameter must exceed -1, got {p}")
    return p + 1


def _weights(theta, n, exact):
    return plus_weights(theta, n, exact=exact)


def cesaro_mean(a, p, n):
    """(C, p) mean at n.  Exact for object-dtype coefficients and rational p."""
    theta = _theta_of(p)
    c = a.coeffs(n + 1)
    exact = c.dtype == object and is_exact(p)
    w = _weights(theta, n, exact)
    if exact:
        return sum(c[k] * w[n - k] for k in range(n + 1)) / w[n]
    return np.dot(c, w[::-1]) / w[n]


def s_theta(a, theta, n):
    """S_theta(f; n) = sum_{k=1}^n k a_k plus_{n-k}, by direct summation."""
    check_theta(theta)
    if n < 1:
        raise ValidationError("S_theta needs n >= 1")
    c = a.coeffs(n + 1)
    exact = c.dtype == object and is_exact(theta)
    w = _weights(theta, n, exact)
    if exact:
        return sum(k * c[k] * w[n - k] for k in range(1, n + 1))
    k = np.arange(n + 1)
    return np.dot(k * c, w[::-1])


def s_theta_sequence(a, theta, J):
    """S_theta(f; j) for j = 0..J as the coefficients of z f'(z) (1 - z)^(-theta)."""
    check_theta(theta)
    d = ser.derivative_shift(ser.TruncatedSeries(a.coeffs(J + 1)))
    return times_plus(d.coeffs, theta, J + 1)


# -- comparison bound --------------------------------------------------------

@dataclass(frozen=True)
class Thm1Report:
    n: int
    theta: float
    cesaro: complex
    abel: complex
    drift: complex
    lhs: float
    majorant: float
    ratio: float
    j_cap: int
    witness: float
    near_sum: float = field(repr=False, default=0.0)
    far_sum: float = field(repr=False, default=0.0)


def thm1_residual(a, theta, n, j_cap_factor=DEFAULT_J_CAP_FACTOR):
    """|C_n - f(e^(-1/n)) - S_theta(f;n)/(n plus_n)| against the two-sum majorant.

    The majorant's infinite sums are cut at J = ceil(j_cap_factor * n); the
    size of the last included term is reported as ``witness`` and must be
    negligible against the accumulated majorant.
    """
    check_theta(theta)
    theta = float(theta)
    if n < 1:
        raise ValidationError("n must be >= 1")
    if j_cap_factor < 10:
        raise ValidationError("j_cap_factor must be at least 10")
    J = math.ceil(j_cap_factor * n)
    S = s_theta_sequence(a, theta, J)
    w = plus_weights(theta, n)
    c = a.coeffs(n + 1)
    cesaro = np.dot(c, w[::-1]) / w[n]
    abel = ser.eval_tail(a, math.exp(-1.0 / n), tol=ABEL_TOL)
    drift = S[n] / (n * w[n])
    lhs = float(abs(cesaro - abel - drift))

    j = np.arange(1, J + 1, dtype=np.float64)
    damp = np.exp(-j / n)
    absS = np.abs(S[1:])
    near_terms = absS * j**-theta * damp / n
    far_terms = absS[n - 1 :] / j[n - 1 :] * damp[n - 1 :] / n**theta
    near, far = float(np.sum(near_terms)), float(np.sum(far_terms))
    majorant = near + far
    witness = float(near_terms[-1] + far_terms[-1])
    if witness > WITNESS_RTOL * majorant:
        raise ValidationError(
            f"majorant tail not negligible at J={J} (last term {witness:.3e}); raise j_cap_factor"
        )
    ratio = lhs / majorant if majorant > 0 else math.nan
    return Thm1Report(n, theta, complex(cesaro), complex(abel), complex(drift), lhs, majorant,
                      ratio, J, witness, near, far)


# -- Tauberian conditions ----------------------------------------------------

def geometric_grid(N, n0=100):
    """n0 * 2^i below N, then N itself."""
    if N < 1:
        raise ValidationError("N must be positive")
    n0 = max(1, min(n0, N))
    grid = []
    n = n0
    while n < N:
        grid.append(n)
        n *= 2
    grid.append(N)
    return grid


def _spread(values):
    values = np.asarray(values)
    return float(np.max(np.abs(values[:, None] - values[None, :])))


@dataclass(frozen=True)
class TauberReport:
    p: float
    grid: list
    abel: list
    cesaro: list
    s_ratio: list
    abel_limit: complex
    cesaro_limit: complex
    abel_converges: bool
    second_condition: bool
    cesaro_converges: bool
    summable: bool
    consistent: bool
    tol: float

    @property
    def verdict(self):
        if self.summable:
            # no more digits than the limit certificate supports
            digits = max(0, math.ceil(-math.log10(self.tol)))
            a = complex(round(self.abel_limit.real, digits), round(self.abel_limit.imag, digits))
            shown = f"{a.real:g}" if a.imag == 0 else f"{a:g}"
            return f"summable, A ~ {shown}"
        return f"not (C,{self.p:g}) summable"


def tauber_conditions(a, p, N, n0=100, tol=LIMIT_TOL):
    """Sample the Abel values, (C, p) means and S_{p+1}(f;n)/n^(p+1) on a geometric grid.

    The finite limit certificate: a sequence converges when its last three
    grid values lie within ``tol`` of each other; the second condition also
    needs its last value within ``tol`` of 0.  ``consistent`` records whether
    the observed Cesaro behaviour agrees with the equivalence.
    """
    theta = _theta_of(p)
    grid = geometric_grid(N, n0)
    w = plus_weights(theta, N)
    c = a.coeffs(N + 1)
    kc = np.arange(N + 1) * c
    abel, ces, srat = [], [], []
    for n in grid:
        rw = w[n::-1]
        abel.append(complex(ser.eval_tail(a, math.exp(-1.0 / n), tol=ABEL_TOL)))
        ces.append(complex(np.dot(c[: n + 1], rw) / w[n]))
        srat.append(complex(np.dot(kc[: n + 1], rw) / float(n) ** theta))
    tail = slice(-3, None)
    abel_ok = _spread(abel[tail]) <= tol
    second = _spread(srat[tail]) <= tol and abs(srat[-1]) <= tol
    ces_ok = _spread(ces[tail]) <= tol
    summable = abel_ok and second
    cesaro_matches = ces_ok and abel_ok and abs(ces[-1] - abel[-1]) <= tol
    return TauberReport(float(p), grid, abel, ces, srat, abel[-1], ces[-1], abel_ok, second,
                        ces_ok, summable, summable == cesaro_matches, tol)


# -- inversion identity ------------------------------------------------------

def inversion_check(a, theta, N):
    """max_n |n a_n - sum_{k=1}^n S_theta(f;k) minus_{n-k}| over 1 <= n <= N.

    Both sides by direct summation; returns 0 exactly in exact mode.
    """
    check_theta(theta)
    c = a.coeffs(N + 1)
    exact = c.dtype == object and is_exact(theta)
    w = plus_weights(theta, N, exact=exact)
    m = minus_weights(theta, N, exact=exact)
    if exact:
        S = [0] + [sum(k * c[k] * w[n - k] for k in range(1, n + 1)) for n in range(1, N + 1)]
        errs = [abs(n * c[n] - sum(S[k] * m[n - k] for k in range(1, n + 1))) for n in range(1, N + 1)]
        return max(errs, default=0)
    kc = np.arange(N + 1) * c
    S = np.zeros(N + 1, dtype=np.result_type(c, np.float64))
    for n in range(1, N + 1):
        S[n] = np.dot(kc[1 : n + 1], w[n - 1 :: -1][:n])
    worst = 0.0
    for n in range(1, N + 1):
        rhs = np.dot(S[1 : n + 1], m[n - 1 :: -1][:n])
        worst = max(worst, float(abs(kc[n] - rhs)))
    return worst
