import math
import warnings
from fractions import Fraction

import mpmath as mp
import pytest

from conftest import struve_c1, struve_c3
from oscsym.errors import DomainError, PrecisionExhausted, SlowConvergence
from oscsym.odd_special import (bessel_residual, bessel_u, laplace_F, odd_subseries_coefficient,
                                required_bits, w_series)
from oscsym.radial_core import double_factorial, rational_coefficients


def test_bessel_u_examples():
    assert bessel_u(0, 0) == 1
    assert bessel_u(2, 0) == 0.5
    quad = mp.quad(lambda th: mp.exp(2 * mp.cos(th)), [0, mp.pi]) / mp.pi
    assert abs(bessel_u(0, 1, 128) - quad) < 1e-36


def test_bessel_u_matches_modified_bessel():
    for n in range(4):
        for t in (0.3, 4, 25):
            ref = (2 / mp.sqrt(4 * t)) ** n * mp.besseli(n, mp.sqrt(4 * t))
            assert abs(bessel_u(n, t, 128) / ref - 1) < 1e-35


def test_w_series_small_t():
    t = mp.mpf("1e-8")
    assert abs(w_series(0, t, 128) / t - 1) < 1e-15
    assert abs(w_series(1, t, 128) / t - mp.mpf(1) / 3) < 1e-15


def test_w_series_pinned():
    # w_0 = (pi/2) L_0, the modified Struve function
    v = w_series(0, 2, 256)
    assert abs(v - mp.pi / 2 * mp.struvel(0, 2)) < 1e-70
    assert mp.nstr(v, 30) == "3.04331383046139552819319343327"


def test_laplace_examples():
    assert laplace_F(1) == 1
    assert abs(laplace_F(2, 128) - mp.pi / (3 * mp.sqrt(3))) < 1e-37
    assert float(500 * laplace_F(500)) == pytest.approx(math.pi / 2, abs=3e-3)


def test_laplace_small_s_branch():
    warnings.simplefilter("ignore", SlowConvergence)
    for s in (0.2, 0.5, 0.9):
        q = mp.sqrt(1 - mp.mpf(s) ** 2)
        assert abs(laplace_F(s, 128) - mp.atanh(q) / q) < 1e-34


def test_laplace_continuity():
    for eps in (1e-3, 1e-6):
        gap = abs(laplace_F(1 - eps, 128) - laplace_F(1 + eps, 128))
        assert gap < 3 * eps


def test_laplace_slow_convergence_advisory():
    with pytest.warns(SlowConvergence):
        laplace_F(0.05)
    with pytest.raises(DomainError):
        laplace_F(0)


def test_laplace_against_quadrature_oracle():
    def integrand(t):
        with mp.workdps(35 + int(0.45 * t)):
            c1 = mp.pi / 2 * (mp.besseli(0, t) - mp.struvel(0, t))
        return c1 * mp.exp(-1.5 * t)

    # the tail past t = 80 is below e^-120
    with mp.workdps(30):
        ref = mp.quad(integrand, [0, 1, 5, 20, 40, 80])
    assert abs(laplace_F(1.5, 128) - ref) < 1e-25


def test_residual_at_origin():
    r = bessel_residual(0, 0, 0, 128)
    assert abs(r[0] + mp.pi / 2) < 1e-37


def test_required_bits():
    assert required_bits(40) == math.ceil(80 / math.log(2) + 64)
    with pytest.raises(PrecisionExhausted):
        bessel_residual(1, 40, 0, 128)


def test_normalized_residual_is_minus_c():
    for t in (10, 40):
        r = bessel_residual(1, t, 0, 512, normalized=True)[0]
        assert abs(r + struve_c3(t)) < 1e-60
    r = bessel_residual(0, 20, 0, 512)[0]
    assert abs(r + struve_c1(20)) < 1e-60


def test_normalized_residual_scale_at_ten():
    r = bessel_residual(1, 10, 0, 512, normalized=True)[0]
    assert 0.01 < abs(r) < 0.2
    assert abs(r) * 11 < 2


def test_literal_residual_grows():
    # without 2^-n the Bessel term no longer cancels the exponential growth of w_n
    r10 = bessel_residual(1, 10, 0, 512)[0]
    r20 = bessel_residual(1, 20, 0, 512)[0]
    # about e^10 (20/10)^(-3/2)
    assert abs(r20 / r10) > math.exp(8)


def test_residual_derivative_bound_n0():
    r = bessel_residual(0, 20, 1, 512)
    assert abs(r[1]) * 21 ** 2 < 2
    # -c_1'(t) = 1 - t c_3(t)
    ref = 1 - 20 * struve_c3(20)
    assert abs(r[1] - ref) < 1e-40


def test_subseries_connection():
    for n in range(5):
        d = 2 * n + 1
        coeffs = rational_coefficients(d, 61)
        for p in range(31):
            w_coeff = Fraction(1, double_factorial(2 * p + 1) * double_factorial(2 * p + 2 * n + 1))
            assert coeffs[2 * p + 1] * d == -double_factorial(d) * odd_subseries_coefficient(n, p)
            assert odd_subseries_coefficient(n, p) == w_coeff


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_u(-1, 1)
    with pytest.raises(DomainError):
        w_series(0, -1)
