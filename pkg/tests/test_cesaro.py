import math
from fractions import Fraction

import numpy as np
import pytest

from ewens_cesaro import cesaro, ewens
from ewens_cesaro.exceptions import ValidationError
from ewens_cesaro.theta_binom import plus_weights


def test_cesaro_examples():
    alt = cesaro.alternating()
    assert cesaro.cesaro_mean(alt, 1, 2) == pytest.approx(2 / 3, rel=1e-15)
    assert cesaro.cesaro_mean(alt, 1, 1) == pytest.approx(1 / 2, rel=1e-15)
    assert cesaro.cesaro_mean(alt, 0, 7) == 0
    assert cesaro.cesaro_mean(alt, 0, 8) == 1


def test_cesaro_p0_is_partial_sum_exactly():
    c = np.array([Fraction(1, k + 1) for k in range(12)], dtype=object)
    a = cesaro.polynomial(c)
    for n in range(12):
        assert cesaro.cesaro_mean(a, 0, n) == sum(c[: n + 1])


def test_cesaro_exact_rational_p():
    alt = cesaro.polynomial(np.array([Fraction((-1) ** k) for k in range(6)], dtype=object))
    assert cesaro.cesaro_mean(alt, 1, 2) == Fraction(2, 3)
    assert cesaro.cesaro_mean(alt, Fraction(1, 2), 1) == Fraction(1, 3)


def test_cesaro_rejects_p():
    with pytest.raises(ValidationError):
        cesaro.cesaro_mean(cesaro.alternating(), -1, 3)


def test_s_theta_examples():
    ones = cesaro.polynomial(np.ones(10))
    assert cesaro.s_theta(ones, 1, 3) == 6
    alt = cesaro.alternating()
    # theta = 2: sum k (-1)^k (n - k + 1)
    for n in range(1, 12):
        ref = sum(k * (-1) ** k * (n - k + 1) for k in range(1, n + 1))
        assert cesaro.s_theta(alt, 2.0, n) == pytest.approx(ref, abs=1e-12)
    with pytest.raises(ValidationError):
        cesaro.s_theta(alt, 1.0, 0)


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0, 2.7])
def test_s_theta_sequence_matches_direct(theta, backend):
    a = cesaro.geometric(-0.9)
    seq = cesaro.s_theta_sequence(a, theta, 60)
    direct = [cesaro.s_theta(a, theta, n) for n in range(1, 61)]
    assert np.allclose(seq[1:], direct, rtol=1e-12, atol=1e-12)
    assert seq[0] == 0


def test_thm1_impulse_gives_zero():
    imp = cesaro.polynomial(np.array([1.0]))
    r = cesaro.thm1_residual(imp, 2.0, 50)
    assert r.lhs == 0 and r.majorant == 0


def test_thm1_theta2_ratio_stable():
    ratios = [cesaro.thm1_residual(cesaro.alternating(), 2.0, n).ratio for n in (100, 400, 1600)]
    assert max(ratios) / min(ratios) < 4 and max(ratios) < 10


def test_thm1_theta1_ratio_decays_like_one_over_n():
    # at theta = 1 the comparison bound is not sharp: lhs ~ c/n, majorant ~ const
    scaled = [n * cesaro.thm1_residual(cesaro.alternating(), 1.0, n).ratio for n in (100, 400, 1600)]
    assert max(scaled) / min(scaled) < 1.1


def test_thm1_report_consistency():
    r = cesaro.thm1_residual(cesaro.geometric(0.5), 1.5, 200)
    assert r.abel == pytest.approx(1 / (1 - 0.5 * math.exp(-1 / 200)), rel=1e-14)
    assert r.majorant == pytest.approx(r.near_sum + r.far_sum)
    assert r.j_cap == 8000 and r.witness <= 1e-12 * r.majorant


def test_thm1_witness_failure_and_cap_rejection():
    with pytest.raises(ValidationError, match="j_cap_factor"):
        cesaro.thm1_residual(cesaro.geometric(0.5), 2.0, 100, j_cap_factor=10)
    with pytest.raises(ValidationError):
        cesaro.thm1_residual(cesaro.alternating(), 2.0, 100, j_cap_factor=5)


def test_tauber_examples():
    rep = cesaro.tauber_conditions(cesaro.polynomial(np.array([1.0])), 1.0, 10_000)
    assert rep.summable and rep.consistent and rep.verdict == "summable, A ~ 1"
    rep = cesaro.tauber_conditions(cesaro.alternating(), 1.0, 100_000)
    assert rep.summable and rep.consistent
    assert abs(rep.abel_limit - 0.5) < 1e-5 and abs(rep.cesaro_limit - 0.5) < 1e-4
    rep = cesaro.tauber_conditions(cesaro.alternating_linear(), 0.0, 100_000)
    assert not rep.summable and rep.consistent
    assert rep.verdict == "not (C,0) summable"
    assert abs(rep.abel_limit + 0.25) < 1e-6


def test_geometric_grid():
    assert cesaro.geometric_grid(1000) == [100, 200, 400, 800, 1000]
    assert cesaro.geometric_grid(50) == [50]
    with pytest.raises(ValidationError):
        cesaro.geometric_grid(0)


def test_inversion_exact_is_zero():
    c = np.array([Fraction(k * k - 3, k + 2) for k in range(15)], dtype=object)
    assert cesaro.inversion_check(cesaro.polynomial(c), Fraction(3, 2), 14) == 0


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
def test_inversion_random_polynomials(theta):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        deg = int(rng.integers(1, 200))
        c = rng.uniform(-1, 1, deg + 1)
        worst = max(worst, cesaro.inversion_check(cesaro.polynomial(c), theta, 200))
    assert worst <= 1e-10


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_regularity_on_convergent_series(p):
    n = 100_000
    assert cesaro.cesaro_mean(cesaro.geometric(0.5), p, n) == pytest.approx(2.0, abs=1e-4)


@pytest.mark.parametrize("p", [0.0, 0.5, 1.0, 2.0])
def test_generating_function_consistency(p):
    # sum_n plus_n C_n x^n = f(x) (1 - x)^(-theta)
    theta, x, N = p + 1, 0.5, 200
    a = cesaro.geometric(-0.7)
    w = plus_weights(theta, N)
    lhs = math.fsum(w[n] * cesaro.cesaro_mean(a, p, n) * x**n for n in range(N + 1))
    rhs = 1 / (1 + 0.7 * x) * (1 - x) ** (-theta)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_exp_l_stream_matches_big_n_deconvolved():
    spec = ewens.zero_on(4, [1, 3])
    got = cesaro.exp_l(spec, 1.0).coeffs(30)
    # theta = 1: exp(L) = N(z) (1 - z)
    n_coeffs = ewens.big_n_coeffs(spec, 1.0, 29).coeffs
    ref = np.concatenate([[n_coeffs[0]], np.diff(n_coeffs)])
    assert np.allclose(got, ref, atol=1e-14)
