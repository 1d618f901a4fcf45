import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import struve_c1, struve_c3
from oscsym.asymptotics import asymptotic_stack
from oscsym.errors import DomainError, RepOverflow
from oscsym.radial_core import series_stack
from oscsym.symbol_api import (PhasePoint, b, b_scaled, c, c_stack, partial_derivative,
                               radial_rep, scaled_radial, switch_point)
from oscsym.verify_oracles import symbol_estimate_fit

coord = st.fractions(-3, 3, max_denominator=16)


def test_phase_point():
    X = PhasePoint.from_parts((1, 2), (Fraction(1, 2), 0))
    assert X.dim == 2 and X.radial == Fraction(21, 4)
    assert X.x == (1, 2) and X.xi == (Fraction(1, 2), 0)
    with pytest.raises(DomainError):
        PhasePoint((1, 2, 3))


def test_c_examples():
    assert float(c(2, 3).value) == pytest.approx((1 - math.exp(-3)) / 3, rel=1e-15)
    ev = c(1, 0, 128)
    assert abs(ev.value - mp.pi / 2) < 1e-37 and ev.route.route == "series"
    ev = c(3, 40, 128)
    assert abs(ev.value - struve_c3(40)) < 1e-35
    assert float(ev.value) == pytest.approx(0.0249844, abs=1e-7)


def test_routes():
    assert c(4, 100).route.route == "even-closed"
    assert c(3, 1).route.route == "series"
    far = switch_point(3, 128) + 10
    ev = c(3, far, 128)
    assert ev.route.route == "asymptotic" and ev.route.terms > 1
    assert abs(ev.value - struve_c3(far)) <= ev.err_bound


def test_switch_point_grows_with_precision():
    assert switch_point(1, 53) < switch_point(1, 128) < switch_point(1, 256)
    with pytest.raises(DomainError):
        switch_point(2, 128)


@pytest.mark.parametrize("d", [1, 3, 5])
def test_route_consistency_in_overlap(d):
    sw = switch_point(d, 128)
    for off in (-2, -1, 0, 1, 2):
        t = Fraction(sw) + off
        ser = series_stack(d, t, 2, 128)
        asy = asymptotic_stack(d, t, 2, 128)
        for k in range(3):
            assert abs(ser[k] - asy[k]) <= ser.err_bounds[k] + asy.err_bounds[k]


def test_b_examples():
    assert float(b(2, PhasePoint((0.6, 0, 0.8, 0))).value) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    X = PhasePoint((Fraction(1, 2),) * 4 + (0,) * 4)
    assert abs(b(4, X, 128).value - (4 * mp.exp(-1) - 1)) < 1e-37
    assert abs(b(1, PhasePoint((0, 0)), 128).value - mp.pi / 2) < 1e-37
    with pytest.raises(DomainError):
        b(2, PhasePoint((1, 0)))


@settings(max_examples=40, deadline=None)
@given(st.lists(coord, min_size=6, max_size=6), st.permutations(range(6)),
       st.lists(st.sampled_from([-1, 1]), min_size=6, max_size=6))
def test_b_symmetries(xs, perm, signs):
    base = b(3, PhasePoint(tuple(xs)), 128).value
    moved = tuple(signs[i] * xs[perm[i]] for i in range(6))
    assert b(3, PhasePoint(moved), 128).value == base
    swapped = tuple(xs[3:]) + tuple(xs[:3])
    assert b(3, PhasePoint(swapped), 128).value == base


@settings(max_examples=40, deadline=None)
@given(d=st.integers(1, 7), t=st.fractions(0, 120, max_denominator=8))
def test_error_bound_is_honest(d, t):
    lo = c(d, t, 53)
    hi = c(d, t, 256)
    assert abs(lo.value - hi.value) <= lo.err_bound + hi.err_bound


def test_radial_rep_structure():
    alpha = (2, 0, 1, 3)
    rep = radial_rep(alpha)
    assert max(rep.terms) == sum(alpha)
    top = rep.terms[sum(alpha)]
    assert len(top) == 1
    (exps, coef), = top.items()
    assert coef == 2 ** sum(alpha)
    assert sorted(exps, reverse=True) == [3, 2, 1]
    assert all(isinstance(v, int) for p in rep.terms.values() for v in p.values())


def test_rep_overflow():
    radial_rep((40, 0))
    with pytest.raises(RepOverflow):
        radial_rep((20, 21))


def test_partial_derivative_examples():
    X = PhasePoint((1, 0, 0, 0))
    assert float(partial_derivative(2, (0, 0, 0, 0), X).value) == float(b(2, X).value)
    v = partial_derivative(2, (1, 0, 0, 0), X, 128).value
    assert abs(v - 2 * (2 * mp.exp(-1) - 1)) < 1e-36
    assert float(v) == pytest.approx(-0.528482, abs=1e-6)
    v = partial_derivative(2, (2, 0, 0, 0), PhasePoint((0, 0, 0, 0)), 128).value
    assert v == -1


def _fd(d, alpha, X, h, prec):
    # nested central differences, one coordinate at a time
    def f(coords):
        return b(d, PhasePoint(coords), prec).value

    def diff(fun, i):
        def g(coords):
            up = list(coords); up[i] += h
            dn = list(coords); dn[i] -= h
            return (fun(tuple(up)) - fun(tuple(dn))) * h.denominator / (2 * mp.mpf(h.numerator))
        return g

    fun = f
    for i, a in enumerate(alpha):
        for _ in range(a):
            fun = diff(fun, i)
    return fun(tuple(X.coords))


@pytest.mark.parametrize("d,alpha", [
    (1, (1, 0)), (1, (2, 1)), (2, (1, 1, 0, 0)), (2, (0, 2, 0, 2)), (3, (1, 0, 0, 0, 2, 1)),
    (3, (0, 0, 4, 0, 0, 0)), (4, (1, 0, 1, 0, 0, 1, 0, 1)),
])
def test_partial_derivative_against_finite_differences(d, alpha):
    X = PhasePoint(tuple(Fraction(k + 1, 3) * (-1) ** k for k in range(2 * d)))
    exact = partial_derivative(d, alpha, X, 128).value
    approx = _fd(d, alpha, X, Fraction(1, 10000), 128)
    assert abs(approx - exact) <= 1e-6 * max(abs(exact), 1e-3)


@settings(max_examples=25, deadline=None)
@given(st.lists(coord, min_size=4, max_size=4), st.lists(st.integers(0, 3), min_size=4, max_size=4),
       st.permutations(range(4)))
def test_rep_cache_is_consistent_under_permutation(xs, alpha, perm):
    X = PhasePoint(tuple(xs))
    Y = PhasePoint(tuple(xs[p] for p in perm))
    beta = tuple(alpha[p] for p in perm)
    a = partial_derivative(2, tuple(alpha), X, 128).value
    b_ = partial_derivative(2, beta, Y, 128).value
    assert abs(a - b_) <= mp.ldexp(1, -100) * (1 + abs(a))


def test_b_scaled_examples():
    X = PhasePoint((Fraction(1, 3), 2, Fraction(-1, 2), 1))
    assert b_scaled(2, 1, X, 128).value == b(2, X, 128).value
    X = PhasePoint((0, 0, 2, 0))
    assert abs(b_scaled(2, 4, X, 128).value - (1 - mp.exp(-1)) / 4) < 1e-37
    assert abs(b_scaled(1, Fraction(1, 4), PhasePoint((0, 0)), 128).value - 2 * mp.pi) < 1e-36
    assert scaled_radial(Fraction(1, 2), PhasePoint((2, 2))) == 2 + 8
    with pytest.raises(DomainError):
        b_scaled(1, 0, PhasePoint((1, 1)))


def test_symbol_estimates():
    for s in (0, 1):
        report = symbol_estimate_fit(2, s, 10)
        assert report.passed, report.fitted


def test_odd_dims_match_struve_oracle():
    for t in (0.5, 7, 30, 90, 150):
        assert abs(c(1, t, 128).value - struve_c1(t)) <= 1e-36
        assert abs(c(3, t, 128).value - struve_c3(t)) <= 1e-36


def test_stack_rejects_negative():
    with pytest.raises(DomainError):
        c_stack(2, -1, 1)
    with pytest.raises(DomainError):
        c(0, 1)
