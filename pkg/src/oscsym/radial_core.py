"""Power series of the radial profile ``c_d`` and its derivatives.

``c_d`` solves ``-t c'' - d c' + t c = 1`` and is entire, so

    c_d(t) = sum_k a_k t^k,   a_1 = -1/d,   a_k = a_{k-2} / (k (k+d-1)).

The constant term ``a_0 = alpha * d!! / (d (d-1)!!)`` carries the parity
constant ``alpha`` (1 for even ``d``, pi/2 for odd ``d``), the unique value
for which ``c_d`` stays bounded on ``t >= 0``.

Both parity sub-sums grow like ``e^t`` while ``c_d(t) ~ 1/t``; the series
is therefore trusted only for ``t <= bits * ln2 / 4`` at a given precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, PrecisionExhausted, SingularPoint, Underresolved
from .precision import LN2, Precision, as_precision, context, exact, to_mpf

MAX_ORDER = 4000


def double_factorial(n: int) -> int:
    """``n!!`` with ``0!! = (-1)!! = 1``."""
    if n < -1:
        raise DomainError(f"double factorial undefined for {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def falling(m: int, k: int) -> int:
    """``m (m-1) ... (m-k+1)``."""
    out = 1
    for i in range(k):
        out *= m - i
    return out


def trust_radius(prec) -> float:
    """Largest ``t`` at which the series route is authoritative."""
    return 0.25 * as_precision(prec).bits * LN2


def parity_alpha(ctx, d: int):
    return ctx.mpf(1) if d % 2 == 0 else ctx.pi / 2


@dataclass(frozen=True)
class SeriesCoefficients:
    dim: int
    alpha: object
    coeffs: tuple
    prec: Precision

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]


@dataclass(frozen=True)
class DerivativeStack:
    """Values ``c(t), c'(t), ..., c^(kmax)(t)`` at one point."""

    dim: int
    point: object
    values: tuple
    err_bounds: tuple | None = None
    route: str | None = None

    @property
    def kmax(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def stack_residuals(stack: DerivativeStack) -> list:
    """Residuals of the ODE and of its k-times differentiated forms.

    Entry 0 is ``-t c'' - d c' + t c - 1``; entry ``k`` is
    ``-(t c^(k+2) + k c^(k+1)) - d c^(k+1) + t c^(k) + k c^(k-1)``.
    """
    v, d, t = stack.values, stack.dim, stack.point
    out = []
    if len(v) >= 3:
        out.append(-t * v[2] - d * v[1] + t * v[0] - 1)
    for k in range(1, len(v) - 2):
        out.append(-(t * v[k + 2] + k * v[k + 1]) - d * v[k + 1] + t * v[k] + k * v[k - 1])
    return out


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")


@lru_cache(maxsize=256)
def _coefficients(d: int, K: int, bits: int, alpha_key) -> SeriesCoefficients:
    ctx = context(bits)
    alpha = parity_alpha(ctx, d) if alpha_key is None else ctx.mpf(alpha_key)
    a = [alpha * double_factorial(d) / (d * double_factorial(d - 1)), ctx.mpf(-1) / d]
    for k in range(2, K + 1):
        a.append(a[k - 2] / (k * (k + d - 1)))
    return SeriesCoefficients(d, alpha, tuple(a[: K + 1]), Precision(bits))


def compute_coefficients(d: int, K: int, prec=None, alpha=None) -> SeriesCoefficients:
    """Coefficients ``a_0 .. a_K`` of ``c_d`` at the given precision.

    ``alpha`` overrides the parity constant (used for sensitivity checks).
    """
    _check_dim(d)
    if int(K) != K or K < 1:
        raise DomainError(f"series order must be >= 1, got {K!r}")
    prec = as_precision(prec)
    key = None if alpha is None else str(to_mpf(context(prec.bits + 16), alpha))
    return _coefficients(int(d), int(K), prec.bits, key)


def rational_coefficients(d: int, K: int, method: str = "recurrence") -> list:
    """Exact rational parts of ``a_0 .. a_K``.

    Even entries are ``a_{2p} / a_0``; odd entries are ``a_{2p+1}`` itself.
    ``method`` is ``"recurrence"`` or ``"closed"`` (double-factorial products).
    """
    _check_dim(d)
    if method == "recurrence":
        r = [Fraction(1), Fraction(-1, d)]
        for k in range(2, K + 1):
            r.append(r[k - 2] / (k * (k + d - 1)))
        return r[: K + 1]
    if method == "closed":
        out = []
        for k in range(K + 1):
            p = k // 2
            if k % 2 == 0:
                out.append(Fraction(double_factorial(d - 1),
                                    double_factorial(2 * p) * double_factorial(2 * p + d - 1)))
            else:
                out.append(Fraction(-double_factorial(d),
                                    d * double_factorial(2 * p + 1) * double_factorial(2 * p + d)))
        return out
    raise DomainError(f"unknown method {method!r}")


def order_for(d: int, t, prec, kmax: int = 0) -> int:
    """Series order needed at ``t`` so the neglected tail is below ``2^-(bits+8)``."""
    prec = as_precision(prec)
    t = float(t)
    if t == 0.0:
        return max(2, kmax + 2)
    # Work in logs: log|a_k t^k| tracked via the two-step recurrence.
    target = -(prec.bits + 8) * LN2
    logs = [0.0, math.log(t) - math.log(d)]
    peak = max(logs)
    k = 1
    while True:
        k += 1
        if k > MAX_ORDER:
            raise Underresolved(f"series for d={d} at t={t} needs more than {MAX_ORDER} terms")
        logs.append(logs[k - 2] + 2 * math.log(t) - math.log(k * (k + d - 1)))
        # falling factorial weight of the k-th derivative slot
        lead = logs[k] + kmax * math.log(k)
        peak = max(peak, logs[k])
        ratio = t * t / ((k + 1) * (k + d))
        if k > kmax + 2 and ratio < 0.5 and lead - peak < target and logs[k - 1] - peak < target:
            return k


def _tail_bound(coeffs: SeriesCoefficients, t, k: int):
    """Bound for ``sum_{m > K} falling(m, k) |a_m| t^(m-k)``."""
    K, d, a = coeffs.order, coeffs.dim, coeffs.coeffs
    if K < 2:
        return None
    ratio = float(t) ** 2 * (K + 2) ** 2 / ((K + 1) * (K + d) * max(K + 1 - k, 1) ** 2)
    if ratio >= 0.5:
        return None
    last = abs(a[K]) * falling(K + 2, k) * t ** (K + 2 - k) / ((K + 2) * (K + d + 1))
    prev = abs(a[K - 1]) * falling(K + 1, k) * t ** (K + 1 - k) / ((K + 1) * (K + d))
    return (last + prev) / (1 - ratio)


def _precheck(coeffs: SeriesCoefficients, t):
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if float(t) > trust_radius(coeffs.prec):
        raise PrecisionExhausted(
            f"t={float(t):g} beyond series trust radius {trust_radius(coeffs.prec):.3g} "
            f"at {coeffs.prec.bits} bits")


def c_series(coeffs: SeriesCoefficients, t):
    """Sum of the series at ``t``. Returns ``(value, err_bound)``."""
    ctx = context(coeffs.prec.bits)
    t = to_mpf(ctx, t)
    _precheck(coeffs, t)
    if t == 0:
        return coeffs[0], ctx.mpf(0)
    terms = []
    p = ctx.mpf(1)
    for a in coeffs.coeffs:
        terms.append(a * p)
        p *= t
    tail = _tail_bound(coeffs, t, 0)
    value = ctx.fsum(terms)
    if tail is None or tail > ctx.ldexp(abs(value), -coeffs.prec.bits // 2):
        raise Underresolved(f"order {coeffs.order} too small for t={float(t):g}")
    rounding = ctx.ldexp(ctx.fsum(terms, absolute=True), 2 - coeffs.prec.bits)
    return value, tail + rounding


def c_derivatives_series(coeffs: SeriesCoefficients, t, kmax: int) -> DerivativeStack:
    """Termwise-differentiated series: slot ``k`` is ``c^(k)(t)``."""
    ctx = context(coeffs.prec.bits)
    t = to_mpf(ctx, t)
    _precheck(coeffs, t)
    if kmax < 0:
        raise DomainError("kmax must be >= 0")
    a, K = coeffs.coeffs, coeffs.order
    if t == 0:
        vals = []
        for k in range(kmax + 1):
            if k <= K:
                vals.append(math.factorial(k) * a[k])
            else:
                vals.append(_zero_derivative(coeffs, k))
        return DerivativeStack(coeffs.dim, t, tuple(vals), tuple(ctx.mpf(0) for _ in vals), "series")
    powers = []
    p = ctx.mpf(1)
    for m in range(K + 1):
        powers.append(a[m] * p)
        p *= t
    vals, errs = [], []
    tk = ctx.mpf(1)
    for k in range(kmax + 1):
        terms = [falling(m, k) * powers[m] for m in range(k, K + 1)]
        value = ctx.fsum(terms) / tk
        tail = _tail_bound(coeffs, t, k)
        scale = ctx.fsum(terms, absolute=True) / tk
        if tail is None or tail > ctx.ldexp(scale, -coeffs.prec.bits // 2):
            raise Underresolved(f"order {K} too small for derivative {k} at t={float(t):g}")
        rounding = ctx.ldexp(scale, 2 - coeffs.prec.bits)
        vals.append(value)
        errs.append(tail + rounding)
        tk *= t
    return DerivativeStack(coeffs.dim, t, tuple(vals), tuple(errs), "series")


def _zero_derivative(coeffs, k):
    # (d+k) c^(k+1)(0) = k c^(k-1)(0), with c'(0) = -1/d
    ctx = context(coeffs.prec.bits)
    d = coeffs.dim
    v = [coeffs[0], ctx.mpf(-1) / d]
    for j in range(1, k):
        v.append(j * v[j - 1] / (d + j))
    return v[k]


def zero_stack(d: int, kmax: int, prec=None, alpha=None) -> DerivativeStack:
    """Derivatives at ``t = 0`` from ``(d+k) c^(k+1)(0) = k c^(k-1)(0)``."""
    prec = as_precision(prec)
    ctx = context(prec.bits)
    coeffs = compute_coefficients(d, 2, prec, alpha)
    v = [coeffs[0], ctx.mpf(-1) / d]
    for j in range(1, kmax):
        v.append(j * v[j - 1] / (d + j))
    v = v[: kmax + 1]
    errs = tuple(ctx.ldexp(abs(x), 1 - prec.bits) for x in v)
    return DerivativeStack(d, ctx.mpf(0), tuple(v), errs, "series")


def derivative_recurrence(d: int, t, c0, c1, kmax: int, prec=None) -> DerivativeStack:
    """Higher derivatives from ``(c, c')`` via the differentiated ODE.

    ``c^(k+2) = (t c^(k) + k c^(k-1) - (d+k) c^(k+1)) / t``. The recurrence
    mixes growing and decaying solutions; run it with generous precision.
    """
    _check_dim(d)
    prec = as_precision(prec)
    ctx = context(prec.bits)
    t = to_mpf(ctx, t)
    if t == 0:
        raise SingularPoint("derivative recurrence is singular at t=0; use zero_stack")
    if t < 0:
        raise DomainError(f"t must be positive, got {t}")
    v = [to_mpf(ctx, c0), to_mpf(ctx, c1)]
    if kmax >= 2:
        v.append((t * v[0] - d * v[1] - 1) / t)
    for k in range(1, kmax - 1):
        v.append((t * v[k] + k * v[k - 1] - (d + k) * v[k + 1]) / t)
    return DerivativeStack(d, t, tuple(v[: kmax + 1]), None, "recurrence")


def series_bits(t, target_bits: int, kmax: int = 0) -> int:
    """Working precision so the series at ``t`` still delivers ``target_bits``.

    Adds the cancellation headroom ``2t/ln2`` (plus the ``t^(k+1)/k!`` loss
    of the k-th derivative) and keeps ``t`` inside the trust radius.
    """
    t = float(t)
    headroom = 2 * t / LN2
    if kmax and t > 1:
        headroom += (kmax + 1) * math.log2(t)
    need = target_bits + headroom + 24
    return int(math.ceil(max(need, 4 * t / LN2 + 1, 53)))


def series_value(d: int, t, prec=None, alpha=None):
    """``c_d(t)`` from the series with automatic headroom; ``(value, err)``."""
    prec = as_precision(prec)
    t = exact(t)
    bits = series_bits(t, prec.bits)
    coeffs = compute_coefficients(d, order_for(d, t, bits), Precision(bits), alpha)
    v, e = c_series(coeffs, t)
    ctx = context(prec.bits)
    return +ctx.mpf(v), ctx.mpf(e) + ctx.ldexp(abs(ctx.mpf(v)), 1 - prec.bits)


def series_stack(d: int, t, kmax: int, prec=None, alpha=None) -> DerivativeStack:
    """Derivative stack from the series with automatic headroom."""
    prec = as_precision(prec)
    t = exact(t)
    ctx = context(prec.bits)
    if t == 0:
        return zero_stack(d, kmax, prec, alpha)
    bits = series_bits(t, prec.bits, kmax)
    coeffs = compute_coefficients(d, order_for(d, t, bits, kmax), Precision(bits), alpha)
    s = c_derivatives_series(coeffs, t, kmax)
    vals = tuple(+ctx.mpf(v) for v in s.values)
    errs = tuple(ctx.mpf(e) + ctx.ldexp(abs(v), 1 - prec.bits) for v, e in zip(vals, s.err_bounds))
    return DerivativeStack(d, to_mpf(ctx, t), vals, errs, "series")
