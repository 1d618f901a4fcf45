"""Elementary closed form of ``c_d`` for even ``d = 2n``.

    c_{2n}(t) = sum_{j<n} C(n-1, j) (-1)^j (2j)! g_j(t),
    g_j(t)   = (1 - e^{-t} p_{2j}(t)) / t^{2j+1},

with ``p_m`` the degree-``m`` Taylor polynomial of ``e^t``. Writing
``G_m(t) = (1 - e^{-t} p_m(t)) / t^{m+1}`` we have ``g_j = G_{2j}`` and
``G_m' = -(m+1) G_{m+1}``, so every derivative of ``c_{2n}`` is again a
finite combination of ``G``'s and no difference quotient is ever formed.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DomainError
from .precision import as_precision, context, exact, to_mpf
from .radial_core import DerivativeStack

GUARD_BITS = 32


def taylor_poly_exp(j: int, t, prec=None):
    """``p_j(t) = sum_{m<=j} t^m / m!``."""
    if j < 0:
        raise DomainError("order must be nonnegative")
    ctx = context(as_precision(prec).bits)
    t = to_mpf(ctx, t)
    term, total = ctx.mpf(1), [ctx.mpf(1)]
    for m in range(1, j + 1):
        term = term * t / m
        total.append(term)
    return ctx.fsum(total)


def _G(m: int, t, ctx):
    """``(1 - e^{-t} p_m(t)) / t^(m+1)``, positive and cancellation-free."""
    if t == 0:
        return ctx.mpf(1) / math.factorial(m + 1)
    if t < m + 1:
        # 1 - e^{-t} p_m(t) = e^{-t} sum_{i>m} t^i / i!
        term = ctx.mpf(1) / math.factorial(m + 1)
        terms = [term]
        i = m + 1
        eps = ctx.ldexp(1, -ctx.prec - 4)
        while True:
            i += 1
            term = term * t / i
            terms.append(term)
            if term < eps * terms[0]:
                break
        return ctx.exp(-t) * ctx.fsum(terms)
    p = taylor_poly_exp(m, t, ctx.prec)
    return (1 - ctx.exp(-t) * ctx.mpf(p)) / t ** (m + 1)


def g_term(j: int, t, prec=None):
    """``g_j(t) = (1 - e^{-t} p_{2j}(t)) / t^{2j+1}``; switches branch at ``t = 2j+1``."""
    if j < 0:
        raise DomainError("j must be nonnegative")
    ctx = context(as_precision(prec).bits)
    t = to_mpf(ctx, t)
    if t < 0:
        raise DomainError("t must be nonnegative")
    return _G(2 * j, t, ctx)


def g_term_direct(j: int, t, prec=None):
    """Unswitched difference form; exposed for branch-agreement checks."""
    ctx = context(as_precision(prec).bits)
    t = to_mpf(ctx, t)
    p = taylor_poly_exp(2 * j, t, ctx.prec)
    return (1 - ctx.exp(-t) * p) / t ** (2 * j + 1)


def g_term_series(j: int, t, prec=None):
    """Small-``t`` remainder form; exposed for branch-agreement checks."""
    ctx = context(as_precision(prec).bits)
    t = to_mpf(ctx, t)
    m = 2 * j
    term = ctx.mpf(1) / math.factorial(m + 1)
    terms = [term]
    i = m + 1
    while term > ctx.ldexp(terms[0], -ctx.prec - 4) or i < t + m + 2:
        i += 1
        term = term * t / i
        terms.append(term)
    return ctx.exp(-t) * ctx.fsum(terms)


@lru_cache(maxsize=None)
def _weights(n: int, k: int):
    """Integer weights ``C(n-1,j) (-1)^j (2j+k)!`` multiplying ``G_{2j+k}``."""
    return tuple(math.comb(n - 1, j) * (-1) ** j * math.factorial(2 * j + k) for j in range(n))


def _combine(n, k, t, ctx):
    w = _weights(n, k)
    terms = [wj * _G(2 * j + k, t, ctx) for j, wj in enumerate(w)]
    return ctx.fsum(terms), ctx.fsum(abs(x) for x in terms)


def _evaluate(n, t, kmax, prec):
    prec = as_precision(prec)
    out_ctx = context(prec.bits)
    bits = prec.bits + GUARD_BITS + 2 * n
    while True:
        ctx = context(bits)
        tt = to_mpf(ctx, exact(t))
        vals, errs, ok = [], [], True
        for k in range(kmax + 1):
            v, mag = _combine(n, k, tt, ctx)
            lost = 0 if v == 0 else max(0.0, float(ctx.log(mag / abs(v), 2)))
            if lost > bits - prec.bits - 8:
                ok = False
                bits = prec.bits + int(lost) + GUARD_BITS
                break
            v = (-1) ** k * v
            vals.append(+out_ctx.mpf(v))
            errs.append(out_ctx.ldexp(out_ctx.mpf(mag), 4 + n - bits)
                        + out_ctx.ldexp(abs(out_ctx.mpf(v)), 1 - prec.bits))
        if ok:
            return vals, errs


def _check(n, t):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")


def c_even(n: int, t, prec=None):
    """``c_{2n}(t)`` from the closed form."""
    _check(n, t)
    vals, _ = _evaluate(n, t, 0, prec)
    return vals[0]


def c_even_with_bound(n: int, t, prec=None):
    _check(n, t)
    vals, errs = _evaluate(n, t, 0, prec)
    return vals[0], errs[0]


def c_even_derivatives(n: int, t, kmax: int, prec=None) -> DerivativeStack:
    """Stack ``c_{2n}, c_{2n}', ..., c_{2n}^(kmax)`` at ``t``.

    Uses ``g_j^(k) = (-1)^k (2j+k)!/(2j)! G_{2j+k}``, which follows from
    ``t g_j' = -(2j+1) g_j + e^{-t}/(2j)!``; valid at ``t = 0`` as well.
    """
    _check(n, t)
    if kmax < 0:
        raise DomainError("kmax must be >= 0")
    vals, errs = _evaluate(n, t, kmax, prec)
    ctx = context(as_precision(prec).bits)
    return DerivativeStack(2 * n, to_mpf(ctx, exact(t)), tuple(vals), tuple(errs), "even-closed")


def recursion_cross_check(d: int, t, prec=None):
    """Residuals of the two dimension recursions at ``t``.

    Returns ``(|t c_d - (d-2) c_{d-2}' - 1|, |(d-1) c_d + t c_d' - (d-2) c_{d-2}|)``
    using the dispatched evaluation route for each dimension.
    """
    from .symbol_api import c_stack

    if int(d) != d or d < 3:
        raise DomainError(f"dimension recursion needs d >= 3, got {d!r}")
    prec = as_precision(prec)
    ctx = context(prec.bits)
    hi = c_stack(d, t, 1, prec)
    lo = c_stack(d - 2, t, 1, prec)
    tt = to_mpf(ctx, exact(t))
    r1 = abs(tt * hi[0] - (d - 2) * lo[1] - 1)
    r2 = abs((d - 1) * hi[0] + tt * hi[1] - (d - 2) * lo[0])
    return r1, r2
