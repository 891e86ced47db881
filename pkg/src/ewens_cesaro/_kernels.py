"""Hot inner loops, each with a numba build and a pure-numpy twin.

The ``_*_loop`` functions are the reference implementations.  They are
plain Python, so they also run unchanged on object arrays of
``fractions.Fraction`` for the exact-rational mode.  The public wrappers
pick numba or numpy according to :mod:`ewens_cesaro._accel`, except
``conv``, where np.convolve is faster than the compiled loop.
"""

import numpy as np

from . import _accel


# -- truncated Cauchy product ------------------------------------------------

def _conv_loop(a, b, out):
    # row-wise axpy: the inner loop walks b and out forward, so it vectorises
    size = out.shape[0]
    lb = b.shape[0]
    for j in range(min(a.shape[0], size)):
        aj = a[j]
        if aj == 0:
            continue
        hi = min(size, j + lb)
        for k in range(j, hi):
            out[k] += aj * b[k - j]
    return out


_conv_numba = _accel.jit(_conv_loop)


def conv_numpy(a, b, size):
    out = np.convolve(a[:size], b[:size])[:size]
    if out.shape[0] < size:
        out = np.concatenate([out, np.zeros(size - out.shape[0], dtype=out.dtype)])
    return out


def conv_numba(a, b, size):
    out = np.zeros(size, dtype=np.result_type(a, b))
    return _conv_numba(np.ascontiguousarray(a[:size]), np.ascontiguousarray(b[:size]), out)


def conv(a, b, size):
    """First ``size`` coefficients of the product of two coefficient arrays."""
    if a.dtype == object or b.dtype == object:
        out = np.array([0] * size, dtype=object)
        return _conv_loop(a[:size], b[:size], out)
    if size == 0 or a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros(size, dtype=np.result_type(a, b))
    # np.convolve beats the compiled loop by about 2x at every size measured
    # (see benchmarks/bench_kernels.py), so it serves both backends
    return conv_numpy(a, b, size)


# -- exponential of a series -------------------------------------------------

def _exp_loop(g, deg, out):
    # out[0] must already hold 1; g[0] is ignored.
    for m in range(1, out.shape[0]):
        top = m if m < deg else deg
        acc = out[m]
        for j in range(1, top + 1):
            acc += j * g[j] * out[m - j]
        out[m] = acc / m
    return out


_exp_numba = _accel.jit(_exp_loop)


def _degree(g):
    nz = np.flatnonzero(g)
    return int(nz[-1]) if nz.size else 0


def exp_numpy(g, size):
    out = np.zeros(size, dtype=np.result_type(g, np.float64))
    if size == 0:
        return out
    out[0] = 1
    deg = _degree(g)
    jg = np.arange(deg + 1) * g[: deg + 1]
    for m in range(1, size):
        top = min(m, deg)
        if top:
            out[m] = np.dot(jg[1 : top + 1], out[m - top : m][::-1]) / m
    return out


def exp_numba(g, size):
    out = np.zeros(size, dtype=np.result_type(g, np.float64))
    if size == 0:
        return out
    out[0] = 1
    return _exp_numba(np.ascontiguousarray(g), _degree(g), out)


def exp_coeffs(g, size):
    """Taylor coefficients of exp(g) through index ``size - 1`` (g[0] ignored)."""
    if g.dtype == object:
        out = np.array([0] * size, dtype=object)
        if size:
            out[0] = 1
            nz = [k for k in range(len(g)) if g[k] != 0]
            _exp_loop(g, nz[-1] if nz else 0, out)
        return out
    if _accel.USE_NUMBA:
        return exp_numba(g, size)
    return exp_numpy(g, size)


# -- Chinese restaurant process ----------------------------------------------

def _crp_loop(u_new, u_pick, theta, out):
    n_samples, n = u_new.shape
    label = np.empty(n, np.int64)
    size = np.empty(n, np.int64)
    for s in range(n_samples):
        ncyc = 0
        for i in range(n):
            if u_new[s, i] < theta / (theta + i):
                label[i] = ncyc
                size[ncyc] = 1
                ncyc += 1
            else:
                r = int(u_pick[s, i] * i)
                if r > i - 1:
                    r = i - 1
                c = label[r]
                label[i] = c
                size[c] += 1
        for c in range(ncyc):
            out[s, size[c] - 1] += 1
    return out


_crp_numba = _accel.jit(_crp_loop)


def crp_numba(u_new, u_pick, theta):
    out = np.zeros(u_new.shape, dtype=np.int64)
    return _crp_numba(u_new, u_pick, float(theta), out)


def crp_numpy(u_new, u_pick, theta):
    n_samples, n = u_new.shape
    theta = float(theta)
    rows = np.arange(n_samples)
    labels = np.zeros((n_samples, n), dtype=np.int64)
    fresh = np.ones(n_samples, dtype=np.int64)
    for i in range(1, n):
        new = u_new[:, i] < theta / (theta + i)
        r = np.minimum((u_pick[:, i] * i).astype(np.int64), i - 1)
        labels[:, i] = np.where(new, fresh, labels[rows, r])
        fresh += new
    sizes = np.bincount((rows[:, None] * n + labels).ravel(), minlength=n_samples * n)
    sizes = sizes.reshape(n_samples, n)
    occupied = sizes > 0
    flat = (rows[:, None] * n + sizes - 1)[occupied]
    return np.bincount(flat, minlength=n_samples * n).reshape(n_samples, n).astype(np.int64)


def crp_cycle_types(u_new, u_pick, theta):
    """Cycle-type multiplicities, one row per sample, from pre-drawn uniforms.

    Row ``s`` column ``j - 1`` counts the j-cycles.  Both backends consume
    the same draws, so their outputs are identical.
    """
    u_new = np.ascontiguousarray(u_new, dtype=np.float64)
    u_pick = np.ascontiguousarray(u_pick, dtype=np.float64)
    if _accel.USE_NUMBA:
        return crp_numba(u_new, u_pick, theta)
    return crp_numpy(u_new, u_pick, theta)
