import os
import subprocess
import sys

import numpy as np
import pytest

from ewens_cesaro import _accel, _kernels

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("dtype", [np.float64, np.complex128])
def test_conv_parity(dtype):
    rng = np.random.default_rng(0)
    a = rng.normal(size=300).astype(dtype)
    b = rng.normal(size=250).astype(dtype)
    if dtype == np.complex128:
        a = a + 1j * rng.normal(size=300)
    x = _kernels.conv_numba(a, b, 400)
    y = _kernels.conv_numpy(a, b, 400)
    assert np.allclose(x, y, rtol=1e-12, atol=1e-12)


def test_exp_parity():
    rng = np.random.default_rng(1)
    g = np.zeros(500, dtype=np.complex128)
    g[1:30] = rng.normal(size=29) / np.arange(1, 30)
    x = _kernels.exp_numba(g, 500)
    y = _kernels.exp_numpy(g, 500)
    assert np.allclose(x, y, rtol=1e-12, atol=1e-14)


def test_crp_parity_is_exact():
    rng = np.random.default_rng(2)
    u_new = rng.random((2000, 40))
    u_pick = rng.random((2000, 40))
    for theta in (0.3, 1.0, 4.0):
        x = _kernels.crp_numba(u_new, u_pick, theta)
        y = _kernels.crp_numpy(u_new, u_pick, theta)
        assert x.tobytes() == y.tobytes()
        assert np.all((x * np.arange(1, 41)).sum(axis=1) == 40)


def test_env_flag_selects_numpy():
    code = "from ewens_cesaro import _accel; print(_accel.backend_name())"
    env = dict(os.environ, **{_accel.ENV_FLAG: "1"})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env[_accel.ENV_FLAG] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
