"""Ground truth for Ewens means: exact enumeration of cycle types and a
seeded Chinese-restaurant sampler.

Seed contract: samples are generated in chunks of :data:`CHUNK` rows.  Chunk
``c`` draws from ``PCG64(SeedSequence(seed, spawn_key=(c,)))``, first an
``(m, n)`` block of uniforms deciding "new cycle", then an ``(m, n)`` block
choosing which earlier element to follow.  Element ``i`` (0-based) opens a
new cycle when its first uniform is below theta / (theta + i); otherwise it
joins the cycle of element ``floor(u * i)``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .exceptions import ValidationError
from .theta_binom import check_theta, is_exact

MAX_PARTITION_N = 60
CHUNK = 8192


@dataclass(frozen=True)
class CycleType:
    """Multiplicities s_1..s_n of cycle lengths; sum_j j s_j = n."""

    mult: tuple

    def __post_init__(self):
        if sum((j + 1) * s for j, s in enumerate(self.mult)) != len(self.mult):
            raise ValidationError(f"{self.mult} is not a cycle type of {len(self.mult)}")

    @property
    def n(self):
        return len(self.mult)

    @property
    def cycles(self):
        return sum(self.mult)

    @classmethod
    def from_parts(cls, parts, n):
        mult = [0] * n
        for p in parts:
            mult[p - 1] += 1
        return cls(tuple(mult))


def _ascending_partitions(n):
    # Kelleher's accelerated ascending-composition generator.
    a = [0] * (n + 1)
    k = 1
    y = n - 1
    while k != 0:
        x = a[k - 1] + 1
        k -= 1
        while 2 * x <= y:
            a[k] = x
            y -= x
            k += 1
        l = k + 1
        while x <= y:
            a[k] = x
            a[l] = y
            yield a[: k + 2]
            x += 1
            y -= 1
        a[k] = x + y
        y = x + y - 1
        yield a[: k + 1]


def partitions(n):
    """Every cycle type of S_n once.

    Order: partitions written as nondecreasing part lists, in lexicographic
    order of those lists (so 1+1+...+1 first and n last).  Each call returns
    a fresh iterator.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if n > MAX_PARTITION_N:
        raise ValidationError(f"n = {n} exceeds the enumeration bound {MAX_PARTITION_N}")
    for parts in _ascending_partitions(int(n)):
        yield CycleType.from_parts(parts, n)


def ewens_weight(t, theta):
    """Ewens probability of cycle type t: (n!/theta_(n)) prod_j (theta/j)^s_j / s_j!."""
    check_theta(theta)
    if is_exact(theta):
        theta = Fraction(theta)
        w = Fraction(1)
        for k in range(1, t.n + 1):
            w *= Fraction(k) / (theta + k - 1)
        for j, s in enumerate(t.mult, start=1):
            if s:
                w *= (theta / j) ** s / math.factorial(s)
        return w
    theta = float(theta)
    w = 1.0
    for k in range(1, t.n + 1):
        w *= k / (theta + k - 1)
    for j, s in enumerate(t.mult, start=1):
        if s:
            w *= (theta / j) ** s / math.factorial(s)
    return w


def f_value(fhat, t):
    out = 1
    for j, s in enumerate(t.mult):
        if s:
            out *= fhat[j] ** s
    return out


def brute_mean(spec, theta):
    """sum over cycle types of ewens_weight * prod_j fhat(j)^s_j.

    Exact (a Fraction) when theta and every fhat(j) are rational reals.
    """
    fhat = spec.fhat
    exact = is_exact(theta) and spec.exact and all(is_exact(v) for v in fhat)
    if not exact:
        fhat = [complex(v) for v in fhat]
        theta = float(theta)
    total = Fraction(0) if exact else 0j
    for t in partitions(spec.n):
        total += ewens_weight(t, theta) * f_value(fhat, t)
    return total


def _chunk_rng(seed, chunk):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def crp_cycle_types(n, theta, samples, seed):
    """(samples, n) array of cycle-type multiplicities drawn from the Ewens measure."""
    check_theta(theta)
    if n < 1 or samples < 1:
        raise ValidationError("n and samples must be positive")
    out = np.empty((samples, n), dtype=np.int64)
    for c, start in enumerate(range(0, samples, CHUNK)):
        m = min(CHUNK, samples - start)
        rng = _chunk_rng(seed, c)
        u_new = rng.random((m, n))
        u_pick = rng.random((m, n))
        out[start : start + m] = _kernels.crp_cycle_types(u_new, u_pick, float(theta))
    return out


def crp_sample(n, theta, seed):
    return CycleType(tuple(int(s) for s in crp_cycle_types(n, theta, 1, seed)[0]))


def f_values(fhat, mult):
    """prod_j fhat(j)^s_j for each row of a multiplicity array."""
    fhat = np.asarray(fhat, dtype=np.complex128)
    vals = np.ones(mult.shape[0], dtype=np.complex128)
    for j in range(mult.shape[1]):
        s = mult[:, j]
        hit = s > 0
        if hit.any():
            vals[hit] *= fhat[j] ** s[hit]
    return vals


def mc_mean(spec, theta, samples, seed):
    """Monte-Carlo estimate of M_n(f) and its standard error."""
    if samples < 100:
        raise ValidationError("mc_mean needs at least 100 samples")
    vals = f_values(spec.fhat.astype(np.complex128), crp_cycle_types(spec.n, theta, samples, seed))
    # shifted by the first draw so a constant sample averages exactly
    dev = vals - vals[0]
    est = vals[0] + dev.mean()
    var = dev.real.var(ddof=1) + dev.imag.var(ddof=1)
    return complex(est), float(math.sqrt(var / samples))
