"""Special functions attached to odd dimensions ``d = 2n + 1``.

``u_n(t) = sum_p t^p / (p! (p+n)!)`` is a rescaled modified Bessel function,
``u_n(t^2/4) = (2/t)^n I_n(t)``. ``w_n(t) = sum_p t^(2p+1) / ((2p+1)!! (2p+2n+1)!!)``
is the odd sub-series of ``c_{2n+1}``:

    c_{2n+1}(t) = (d!!/d) * ((pi/2) 2^-n u_n(t^2/4) - w_n(t)).

``F`` is the Laplace transform of ``c_1``.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

from .errors import DomainError, PrecisionExhausted, SlowConvergence
from .precision import LN2, as_precision, context, exact, to_mpf
from .radial_core import DerivativeStack, double_factorial, falling

LAPLACE_MAX_TERMS = 200_000


def _positive_series(first, ratio, ctx, kmax=0):
    """Sum a positive series given its first term and the term ratio ``ratio(p)``."""
    terms = [first]
    p = 0
    eps = ctx.ldexp(1, -ctx.prec - 8)
    while True:
        r = ratio(p)
        terms.append(terms[-1] * r)
        p += 1
        if r < 0.5 and terms[-1] < eps * terms[0] and p > kmax:
            return terms


def bessel_u(n: int, t, prec=None):
    """``sum_p t^p / (p! (p+n)!)``."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    ctx = context(as_precision(prec).bits + 8)
    t = to_mpf(ctx, exact(t))
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t == 0:
        return +context(as_precision(prec).bits).mpf(ctx.mpf(1) / math.factorial(n))
    terms = _positive_series(ctx.mpf(1) / math.factorial(n), lambda p: t / ((p + 1) * (p + n + 1)), ctx)
    return +context(as_precision(prec).bits).mpf(ctx.fsum(terms))


def w_series(n: int, t, prec=None):
    """``sum_p t^(2p+1) / ((2p+1)!! (2p+2n+1)!!)``."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    ctx = context(as_precision(prec).bits + 8)
    t = to_mpf(ctx, exact(t))
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t == 0:
        return context(as_precision(prec).bits).mpf(0)
    first = t / double_factorial(2 * n + 1)
    terms = _positive_series(first, lambda p: t * t / ((2 * p + 3) * (2 * p + 2 * n + 3)), ctx)
    return +context(as_precision(prec).bits).mpf(ctx.fsum(terms))


def laplace_F(s, prec=None):
    """Laplace transform of ``c_1`` at ``s > 0``.

    ``arctan(sqrt(s^2-1)) / sqrt(s^2-1)`` for ``s > 1``, the series
    ``sum_p (1-s^2)^p / (2p+1)`` for ``0 < s <= 1``.
    """
    prec = as_precision(prec)
    ctx = context(prec.bits + 8)
    s = to_mpf(ctx, exact(s))
    if s <= 0:
        raise DomainError("laplace_F needs s > 0")
    out = context(prec.bits)
    if s > 1:
        r = ctx.sqrt(s * s - 1)
        return +out.mpf(ctx.atan(r) / r)
    q = 1 - s * s
    if q == 0:
        return out.mpf(1)
    eps = ctx.ldexp(1, -prec.bits - 4)
    terms, qp, p = [], ctx.mpf(1), 0
    while True:
        terms.append(qp / (2 * p + 1))
        qp *= q
        p += 1
        tail = qp / ((2 * p + 1) * (1 - q))
        if tail < eps:
            break
        if p >= LAPLACE_MAX_TERMS:
            warnings.warn(f"laplace_F series at s={float(s):g} truncated after {p} terms; "
                          f"tail bound {float(tail):.3g}", SlowConvergence, stacklevel=2)
            break
    if q > 0.9 and p < LAPLACE_MAX_TERMS:
        warnings.warn(f"laplace_F series at s={float(s):g} converges slowly (ratio {float(q):.4f}); "
                      f"{p} terms, tail bound {float(tail):.3g}", SlowConvergence, stacklevel=2)
    return +out.mpf(ctx.fsum(terms))


def required_bits(t) -> int:
    """Precision needed to resolve the ``O(1/t)`` residual under ``e^t`` cancellation."""
    return int(math.ceil(2 * float(t) / LN2 + 64))


def bessel_residual(n: int, t, kmax: int, prec=None, normalized: bool = False) -> DerivativeStack:
    """Derivatives of ``w_n(t) - (pi/2) u_n(t^2/4)``.

    With ``normalized=True`` the Bessel term carries the extra ``2^-n``
    that makes the difference equal to ``-(d/d!!) c_{2n+1}(t)``; without it
    the difference grows like ``e^t`` for ``n >= 1``.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    prec = as_precision(prec)
    t = exact(t)
    if t < 0:
        raise DomainError("t must be nonnegative")
    if prec.bits < required_bits(t):
        raise PrecisionExhausted(f"bessel_residual at t={float(t):g} needs {required_bits(t)} bits, "
                                 f"got {prec.bits}")
    ctx = context(prec.bits)
    tt = to_mpf(ctx, t)
    scale = ctx.pi / 2 / (2 ** n if normalized else 1)
    # coefficients of t^m in w_n and in u_n(t^2/4), exact rationals
    log_eps = -(prec.bits + 8) * LN2
    log_t = math.log(float(t)) if t > 0 else -math.inf
    w_c, u_c = [], []
    m = 0
    tf = float(t)
    while True:
        if m % 2:
            p = (m - 1) // 2
            w_c.append(Fraction(1, double_factorial(2 * p + 1) * double_factorial(2 * p + 2 * n + 1)))
            u_c.append(Fraction(0))
        else:
            p = m // 2
            w_c.append(Fraction(0))
            u_c.append(Fraction(1, 4 ** p * math.factorial(p) * math.factorial(p + n)))
        m += 1
        if m > kmax + 4 and tf * tf < 0.25 * m * m:
            coef = w_c[-1] or w_c[-2]
            size = math.log(coef.numerator) - math.log(coef.denominator) + m * log_t + kmax * math.log(m)
            if size < log_eps:
                break
    vals = []
    for k in range(kmax + 1):
        terms = []
        for j in range(k, m):
            cw = to_mpf(ctx, w_c[j]) if w_c[j] else 0
            cu = to_mpf(ctx, u_c[j]) * scale if u_c[j] else 0
            coef = cw - cu
            if coef:
                terms.append(falling(j, k) * coef * tt ** (j - k))
        vals.append(ctx.fsum(terms))
    return DerivativeStack(2 * n + 1, tt, tuple(vals), None, "bessel")


def odd_subseries_coefficient(n: int, p: int) -> Fraction:
    """Coefficient of ``t^(2p+1)`` in ``c_{2n+1}`` divided by ``-(d!!/d)``; equals the ``w_n`` one."""
    d = 2 * n + 1
    a = Fraction(-double_factorial(d), d * double_factorial(2 * p + 1) * double_factorial(2 * p + d))
    return a / Fraction(-double_factorial(d), d)
