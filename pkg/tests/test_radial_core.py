from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import struve_c1, struve_c3
from oscsym.errors import DomainError, PrecisionExhausted, SingularPoint, Underresolved
from oscsym.precision import Precision
from oscsym.radial_core import (c_derivatives_series, c_series, compute_coefficients,
                                derivative_recurrence, double_factorial, order_for,
                                rational_coefficients, series_stack, series_value,
                                stack_residuals, trust_radius, zero_stack)


def close(a, b, rel):
    return abs(a - b) <= rel * max(abs(b), mp.mpf(10) ** -300)


def test_double_factorial_conventions():
    assert double_factorial(0) == 1
    assert double_factorial(-1) == 1
    assert double_factorial(7) == 105
    assert double_factorial(8) == 384


def test_coefficients_d2():
    a = compute_coefficients(2, 4, 128)
    assert [float(x) for x in a.coeffs] == pytest.approx([1, -1 / 2, 1 / 6, -1 / 24, 1 / 120], rel=1e-15)


def test_coefficients_d1_short():
    a = compute_coefficients(1, 1, 128)
    assert close(a[0], mp.pi / 2, 1e-35)
    assert a[1] == -1


def test_coefficients_d4_short():
    a = compute_coefficients(4, 1, 128)
    assert close(a[0], mp.mpf(2) / 3, 1e-35)
    assert close(a[1], mp.mpf(-1) / 4, 1e-35)


def test_coefficients_reject_bad_input():
    with pytest.raises(DomainError):
        compute_coefficients(0, 4)
    with pytest.raises(DomainError):
        compute_coefficients(3, 0)


@pytest.mark.parametrize("d", range(1, 9))
def test_coefficient_invariants(d):
    a = compute_coefficients(d, 40, 192)
    ctx = mp.mp.clone()
    ctx.prec = 192
    assert close(a[1], ctx.mpf(-1) / d, 1e-55)
    for k in range(2, 41):
        assert close(a[k] * k * (k + d - 1), a[k - 2], 1e-55)
    for k in range(41):
        assert (a[k] > 0) == (k % 2 == 0)
    alpha = ctx.pi / 2 if d % 2 else ctx.mpf(1)
    assert close(a[0], alpha * double_factorial(d) / (d * double_factorial(d - 1)), 1e-55)


def test_rational_recurrence_matches_closed_products():
    for d in range(1, 13):
        assert rational_coefficients(d, 60, "recurrence") == rational_coefficients(d, 60, "closed")


def test_even_part_independent_of_alpha():
    lo = rational_coefficients(3, 20)
    assert lo[0] == 1
    assert lo[2] == Fraction(1, 2 * 4)
    assert lo[1] == Fraction(-1, 3)


def test_series_d2_matches_closed_form():
    v, err = c_series(compute_coefficients(2, 60, 128), 1)
    assert close(v, 1 - mp.exp(-1), 1e-36)
    assert err < 1e-35


def test_series_at_zero_is_a0():
    for d in (1, 2, 5):
        coeffs = compute_coefficients(d, 10, 128)
        v, _ = c_series(coeffs, 0)
        assert v == coeffs[0]


def test_series_d3_pinned():
    # 256-bit summation with K = 200
    v, _ = c_series(compute_coefficients(3, 200, 256), 2)
    assert close(v, struve_c3(2), 1e-70)
    assert mp.nstr(v, 30) == "0.383177752597287584652476559975"


def test_series_underresolved():
    with pytest.raises(Underresolved):
        c_series(compute_coefficients(2, 4, 128), 3)


def test_series_outside_trust_radius():
    assert trust_radius(128) == pytest.approx(0.25 * 128 * 0.6931471805599453)
    with pytest.raises(PrecisionExhausted):
        c_series(compute_coefficients(1, 400, 128), 40)


def test_adaptive_order_reaches_target():
    K = order_for(1, 10, 256)
    a = compute_coefficients(1, K, 256)
    assert abs(a[K]) * 10 ** K < 2 ** -200


def test_derivative_series_at_zero():
    s = c_derivatives_series(compute_coefficients(2, 10, 128), 0, 1)
    assert list(s.values) == [1, mp.mpf(-1) / 2]
    s = c_derivatives_series(compute_coefficients(1, 10, 128), 0, 1)
    assert close(s[0], mp.pi / 2, 1e-35) and s[1] == -1


def test_derivative_series_d2_at_one():
    s = c_derivatives_series(compute_coefficients(2, 80, 128), 1, 2)
    assert [float(v) for v in s.values] == pytest.approx([0.632121, -0.264241, 0.160603], abs=1e-6)
    e = mp.exp(-1)
    assert close(s[1], 2 * e - 1, 1e-30)
    assert close(s[2], 2 - 5 * e, 1e-30)


def test_zero_stack_relation():
    s = zero_stack(3, 8, 128)
    for k in range(1, 7):
        assert close((3 + k) * s[k + 1], k * s[k - 1], 1e-35)


def test_recurrence_d2_second_derivative():
    e = mp.exp(-1)
    s = derivative_recurrence(2, 1, 1 - e, 2 * e - 1, 2, 128)
    assert close(s[2], 2 - 5 * e, 1e-30)


def test_recurrence_kmax1_unchanged():
    s = derivative_recurrence(5, 2, Fraction(3, 8), Fraction(-1, 16), 1, 128)
    assert list(s.values) == [Fraction(3, 8), Fraction(-1, 16)]


def test_recurrence_singular_at_zero():
    with pytest.raises(SingularPoint):
        derivative_recurrence(2, 0, 1, -0.5, 3, 128)


def test_recurrence_matches_series_d3():
    ser = series_stack(3, 5, 10, 256)
    rec = derivative_recurrence(3, 5, ser[0], ser[1], 10, 256)
    for k in range(11):
        assert close(rec[k], ser[k], 1e-20)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 12), t=st.fractions(0, 20, max_denominator=64))
def test_recurrence_agrees_with_series(d, t):
    if t == 0:
        return
    ser = series_stack(d, t, 6, 128)
    rec = derivative_recurrence(d, t, ser[0], ser[1], 6, 128)
    for k in range(7):
        scale = max(abs(ser[j]) * float(t) ** (j - k) for j in range(k + 1))
        assert abs(rec[k] - ser[k]) <= mp.ldexp(scale, -110) * 2 ** (2 * k)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 12), t=st.fractions(0, 30, max_denominator=16))
def test_stack_satisfies_differentiated_ode(d, t):
    s = series_stack(d, t, 6, 128)
    for r, k in zip(stack_residuals(s), range(5)):
        assert abs(r) <= mp.ldexp(1, -100) * (1 + float(t)) ** 2 * (k + 1) ** 3


def test_series_value_matches_struve_oracle():
    for t in (1, 5, 20, 40):
        v, err = series_value(1, t, 128)
        assert close(v, struve_c1(t), 1e-36)
        assert err < 1e-36


def test_precision_floor():
    with pytest.raises(ValueError):
        Precision(40)
