"""Large-argument expansion ``c_d(t) ~ sum_j kappa_j t^(-1-2j)``.

``kappa_0 = 1`` and ``kappa_j = (-1)^j (2j-1)!! prod_{l=1..j} (d - 2l)``.
For even ``d`` the coefficients vanish from ``j = d/2`` on; for odd ``d``
they grow factorially and the expansion is only asymptotic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivergenceFloor, DomainError, InsufficientSignal
from .even_closed_form import _G
from .precision import as_precision, context, exact, to_mpf
from .radial_core import DerivativeStack, double_factorial, falling


@dataclass(frozen=True)
class AsymptoticExpansion:
    dim: int
    terms: int
    coeffs: tuple

    def __call__(self, t, prec=None):
        return c_asymptotic(self.dim, self.terms, t, prec)[0]


@lru_cache(maxsize=None)
def h_coeff(d: int, j: int) -> int:
    """``kappa_j``, exact integer."""
    if d < 1 or j < 0:
        raise DomainError(f"need d >= 1 and j >= 0, got d={d}, j={j}")
    prod = 1
    for l in range(1, j + 1):
        prod *= d - 2 * l
    return (-1) ** j * double_factorial(2 * j - 1) * prod


def expansion(d: int, N: int) -> AsymptoticExpansion:
    if N < 1:
        raise DomainError("need at least one term")
    return AsymptoticExpansion(d, N, tuple(h_coeff(d, j) for j in range(N)))


def _log_abs_coeff(d, j):
    k = h_coeff(d, j)
    return -math.inf if k == 0 else math.log(abs(k))


def optimal_terms(d: int, t, kmax_order: int = 0, cap: int = 400) -> int:
    """``N`` minimising the first omitted term of the ``k``-th derivative series."""
    t = float(t)
    if d % 2 == 0:
        return d // 2
    best, best_n = math.inf, 1
    for n in range(1, cap):
        # magnitude of d^k/dt^k kappa_n t^(-1-2n)
        mag = _log_abs_coeff(d, n) + math.lgamma(2 * n + 1 + kmax_order) - math.lgamma(2 * n + 1) \
            - (1 + 2 * n + kmax_order) * math.log(t)
        if mag < best:
            best, best_n = mag, n
        elif mag > best + 5:
            break
    return best_n


def omitted_term_log(d: int, N: int, t, k: int = 0) -> float:
    """Natural log of ``|d^k/dt^k kappa_N t^(-1-2N)|``."""
    t = float(t)
    return _log_abs_coeff(d, N) + math.lgamma(2 * N + 1 + k) - math.lgamma(2 * N + 1) \
        - (1 + 2 * N + k) * math.log(t)


def c_asymptotic(d: int, N: int, t, prec=None):
    """``sum_{j<N} kappa_j t^(-1-2j)`` and the size of the first omitted term."""
    if N < 1:
        raise DomainError("need N >= 1")
    ctx = context(as_precision(prec).bits)
    t = to_mpf(ctx, exact(t))
    if t <= 0:
        raise DomainError("asymptotic expansion needs t > 0")
    inv2 = 1 / (t * t)
    p = 1 / t
    terms = []
    for j in range(N):
        terms.append(h_coeff(d, j) * p)
        p *= inv2
    omitted = abs(h_coeff(d, N) * p)
    if omitted > abs(terms[-1]) and terms[-1] != 0:
        warnings.warn(f"truncation N={N} at t={float(t):g} is past the smallest term",
                      DivergenceFloor, stacklevel=2)
    return ctx.fsum(terms), omitted


def c_asymptotic_derivatives(d: int, t, kmax: int, prec=None, terms=None):
    """Termwise derivatives of the expansion, each optimally truncated.

    Returns ``(values, errors)`` where ``errors[k]`` is the first omitted term
    of the ``k``-th derivative series.
    """
    ctx = context(as_precision(prec).bits)
    t = to_mpf(ctx, exact(t))
    if t <= 0:
        raise DomainError("asymptotic expansion needs t > 0")
    vals, errs = [], []
    for k in range(kmax + 1):
        N = terms or optimal_terms(d, t, k)
        parts = []
        for j in range(N):
            kap = h_coeff(d, j)
            if kap:
                parts.append((-1) ** k * kap * falling(2 * j + k, k) / t ** (1 + 2 * j + k))
        vals.append(ctx.fsum(parts))
        kap = h_coeff(d, N)
        errs.append(abs(ctx.mpf(kap) * falling(2 * N + k, k) / t ** (1 + 2 * N + k)))
    return vals, errs


def asymptotic_stack(d: int, t, kmax: int, prec=None) -> DerivativeStack:
    vals, errs = c_asymptotic_derivatives(d, t, kmax, prec)
    ctx = context(as_precision(prec).bits)
    return DerivativeStack(d, to_mpf(ctx, exact(t)), tuple(vals), tuple(errs), "asymptotic")


def c_asymptotic_tilde(d: int, N: int, t, prec=None):
    """Regularised sum ``sum_{j<N} kappa_j (1 - e^{-t} p_{2j}(t)) t^(-1-2j)``; finite at 0."""
    if N < 1:
        raise DomainError("need N >= 1")
    ctx = context(as_precision(prec).bits + 16)
    tt = to_mpf(ctx, exact(t))
    if tt < 0:
        raise DomainError("t must be nonnegative")
    out = ctx.fsum(h_coeff(d, j) * _G(2 * j, tt, ctx) for j in range(N) if h_coeff(d, j))
    return +context(as_precision(prec).bits).mpf(out)


def b_asymptotic(d: int, N: int, X, prec=None):
    """Homogeneous expansion of the symbol at phase point ``X``."""
    from .symbol_api import as_phase_point

    X = as_phase_point(X, d)
    if X.radial == 0:
        raise DomainError("expansion undefined at X = 0")
    return c_asymptotic(d, N, X.radial, prec)[0]


@dataclass(frozen=True)
class OrderProbe:
    slope: float
    intercept: float
    regime: str
    exp_rate: float
    t: tuple
    remainder: tuple
    used: tuple


def error_order_probe(d: int, N: int, t_grid, reference=None, prec=256) -> OrderProbe:
    """Fit ``log|c_d - sum_{j<N} h_j|`` against ``log t``.

    ``reference(t) -> (value, err_bound)`` defaults to the dispatched evaluator.
    Points whose remainder is under 32x the reference error are dropped.
    The remainder is also fitted with an extra linear-in-``t`` term; a rate
    below ``-0.5`` marks an exponentially small remainder.
    """
    if reference is None:
        from .symbol_api import c as _c

        def reference(t):
            ev = _c(d, t, prec)
            return ev.value, ev.err_bound

    ts, rem, used = [], [], []
    for t in t_grid:
        value, err = reference(t)
        ctx = context(as_precision(prec).bits)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DivergenceFloor)
            approx, _ = c_asymptotic(d, N, t, prec)
        r = abs(ctx.mpf(value) - approx)
        ts.append(float(t))
        rem.append(float(ctx.log(r)) if r > 0 else -math.inf)
        used.append(bool(r > 32 * abs(ctx.mpf(err))))
    x = np.log(np.array(ts)[used])
    y = np.array(rem)[used]
    if len(x) < 3:
        raise InsufficientSignal(f"only {len(x)} grid points above the reference noise floor")
    slope, intercept = np.polyfit(x, y, 1)
    tt = np.array(ts)[used]
    A = np.column_stack([np.ones_like(x), x, tt])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    rate = float(coef[2])
    regime = "exponential" if rate < -0.5 else "algebraic"
    return OrderProbe(float(slope), float(intercept), regime, rate, tuple(ts),
                      tuple(rem), tuple(used))
