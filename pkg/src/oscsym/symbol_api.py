"""Evaluate the Weyl symbol ``b_d(X) = c_d(|X|^2)`` and its derivatives.

Route dispatch for ``c_d(t)``:

* even ``d``: elementary closed form, all ``t``;
* odd ``d``: power series (with cancellation headroom) up to a switch point,
  optimally truncated asymptotic expansion beyond it.

The odd-``d`` switch point is the smallest ``t`` at which the smallest
asymptotic term drops below the target relative accuracy, so it moves with
the requested precision (about 35 at 53 bits, about 90 at 128 bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .asymptotics import c_asymptotic_derivatives, omitted_term_log, optimal_terms
from .errors import DomainError, RepOverflow
from .even_closed_form import c_even_derivatives
from .precision import LN2, Precision, as_precision, context, exact, to_mpf
from .radial_core import DerivativeStack, series_stack

MAX_ORDER = 40
GUARD_BITS = 32


@dataclass(frozen=True)
class PhasePoint:
    """A point ``(x_1..x_d, xi_1..xi_d)`` of phase space."""

    coords: tuple
    radial: Fraction = field(init=False)

    def __post_init__(self):
        if len(self.coords) == 0 or len(self.coords) % 2:
            raise DomainError(f"phase point needs 2d coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "radial", sum((exact(c) ** 2 for c in self.coords), Fraction(0)))

    @classmethod
    def from_parts(cls, x, xi):
        if len(x) != len(xi):
            raise DomainError("x and xi must have the same length")
        return cls(tuple(x) + tuple(xi))

    @property
    def dim(self) -> int:
        return len(self.coords) // 2

    @property
    def x(self):
        return self.coords[: self.dim]

    @property
    def xi(self):
        return self.coords[self.dim:]


def as_phase_point(X, d=None) -> PhasePoint:
    if not isinstance(X, PhasePoint):
        X = PhasePoint(tuple(X))
    if d is not None and X.dim != d:
        raise DomainError(f"phase point has dimension {X.dim}, expected {d}")
    return X


@dataclass(frozen=True)
class RouteChoice:
    route: str
    working_bits: int
    t_switch: float | None = None
    terms: int | None = None


@dataclass(frozen=True)
class Evaluation:
    value: object
    err_bound: object
    route: RouteChoice

    def __float__(self):
        return float(self.value)


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")


@lru_cache(maxsize=None)
def switch_point(d: int, bits: int) -> float:
    """Odd ``d``: smallest ``t`` (0.5 grid) where the asymptotic route meets ``bits``."""
    if d % 2 == 0:
        raise DomainError("switch point only defined for odd d")
    t = 1.0
    while True:
        n = optimal_terms(d, t)
        if omitted_term_log(d, n, t) <= -(bits + 4) * LN2 - math.log(t):
            return t
        t += 0.5


def _odd_asymptotic_ok(d, t, kmax, bits):
    if t <= switch_point(d, bits):
        return False
    # each derivative order must also meet the target
    for k in range(1, kmax + 1):
        n = optimal_terms(d, t, k)
        scale = math.lgamma(k + 1) - (k + 1) * math.log(t)
        if omitted_term_log(d, n, t, k) > scale - (bits + 4) * LN2:
            return False
    return True


def c_stack(d: int, t, kmax: int, prec=None) -> DerivativeStack:
    """``c_d^(k)(t)`` for ``k <= kmax`` through the dispatched route."""
    _check_dim(d)
    prec = as_precision(prec)
    t = exact(t)
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {float(t)}")
    if kmax < 0:
        raise DomainError("kmax must be >= 0")
    if d % 2 == 0:
        return c_even_derivatives(d // 2, t, kmax, prec)
    if _odd_asymptotic_ok(d, float(t), kmax, prec.bits):
        ctx = context(prec.bits)
        vals, errs = c_asymptotic_derivatives(d, t, kmax, Precision(prec.bits + 16))
        vals = tuple(+ctx.mpf(v) for v in vals)
        errs = tuple(ctx.mpf(e) + ctx.ldexp(abs(v), 1 - prec.bits) for v, e in zip(vals, errs))
        return DerivativeStack(d, to_mpf(ctx, t), vals, errs, "asymptotic")
    return series_stack(d, t, kmax, prec)


def c(d: int, t, prec=None) -> Evaluation:
    """``c_d(t)`` with an error bound and the route that produced it."""
    prec = as_precision(prec)
    s = c_stack(d, t, 0, prec)
    if s.route == "even-closed":
        route = RouteChoice("even-closed", prec.bits)
    elif s.route == "asymptotic":
        route = RouteChoice("asymptotic", prec.bits, switch_point(d, prec.bits),
                            optimal_terms(d, float(exact(t))))
    else:
        sw = switch_point(d, prec.bits) if d % 2 else None
        route = RouteChoice("series", prec.bits, sw)
    return Evaluation(s[0], s.err_bounds[0], route)


def b(d: int, X, prec=None) -> Evaluation:
    """Weyl symbol of the inverse oscillator at phase point ``X``."""
    X = as_phase_point(X, d)
    return c(d, X.radial, prec)


@dataclass(frozen=True)
class RadialDerivativeRep:
    """``d^alpha b = sum_k P_k(X) c^(k)(|X|^2)`` with integer polynomials ``P_k``.

    ``variables`` lists the coordinate slots the polynomials refer to; each
    polynomial maps exponent tuples (aligned with ``variables``) to integers.
    """

    alpha: tuple
    variables: tuple
    terms: dict

    @property
    def order(self) -> int:
        return sum(self.alpha)


@lru_cache(maxsize=1024)
def _rep_canonical(orders: tuple) -> dict:
    # orders: nonincreasing positive derivative counts, one per active variable
    nv = len(orders)
    zero = (0,) * nv
    terms = {0: {zero: 1}}
    for var, count in enumerate(orders):
        for _ in range(count):
            new = {}
            for k, poly in terms.items():
                for exps, coef in poly.items():
                    # d/dX_var of the polynomial
                    e = exps[var]
                    if e:
                        ne = exps[:var] + (e - 1,) + exps[var + 1:]
                        bucket = new.setdefault(k, {})
                        bucket[ne] = bucket.get(ne, 0) + coef * e
                    # chain rule: 2 X_var times the next derivative
                    ne = exps[:var] + (e + 1,) + exps[var + 1:]
                    bucket = new.setdefault(k + 1, {})
                    bucket[ne] = bucket.get(ne, 0) + 2 * coef
            terms = {k: {e: v for e, v in p.items() if v} for k, p in new.items()}
            terms = {k: p for k, p in terms.items() if p}
    return terms


def radial_rep(alpha) -> RadialDerivativeRep:
    """Chain-rule representation of ``d^alpha`` applied to a radial function."""
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise DomainError("multi-index entries must be nonnegative")
    if sum(alpha) > MAX_ORDER:
        raise RepOverflow(f"|alpha| = {sum(alpha)} exceeds cap {MAX_ORDER}")
    active = sorted((i for i, a in enumerate(alpha) if a), key=lambda i: (-alpha[i], i))
    orders = tuple(alpha[i] for i in active)
    return RadialDerivativeRep(alpha, tuple(active), _rep_canonical(orders))


def partial_derivative(d: int, alpha, X, prec=None) -> Evaluation:
    """``d^alpha b_d(X)`` via the radial representation and a derivative stack."""
    X = as_phase_point(X, d)
    if len(alpha) != 2 * d:
        raise DomainError(f"multi-index needs {2 * d} entries")
    prec = as_precision(prec)
    rep = radial_rep(alpha)
    work = prec.widened(GUARD_BITS + rep.order)
    stack = c_stack(d, X.radial, rep.order, work)
    ctx = context(work.bits)
    xs = [to_mpf(ctx, exact(X.coords[i])) for i in rep.variables]
    parts, mags = [], []
    for k, poly in rep.terms.items():
        pk = ctx.fsum(coef * ctx.fprod(x ** e for x, e in zip(xs, exps)) for exps, coef in poly.items())
        parts.append(pk * stack[k])
        err = stack.err_bounds[k] if stack.err_bounds else 0
        mags.append(abs(pk) * (abs(stack[k]) + err))
    out = context(prec.bits)
    value = +out.mpf(ctx.fsum(parts))
    bound = out.mpf(ctx.ldexp(ctx.fsum(mags), 2 - work.bits + rep.order)) \
        + out.ldexp(abs(value), 1 - prec.bits)
    return Evaluation(value, bound, RouteChoice(stack.route, work.bits))


def scaled_radial(omega, X) -> Fraction:
    """``omega |x|^2 + |xi|^2 / omega`` exactly (rational ``omega``)."""
    X = as_phase_point(X)
    w = exact(omega)
    if w <= 0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    x2 = sum((exact(v) ** 2 for v in X.x), Fraction(0))
    xi2 = sum((exact(v) ** 2 for v in X.xi), Fraction(0))
    return w * x2 + xi2 / w


def b_scaled(d: int, omega, X, prec=None) -> Evaluation:
    """Symbol of ``(-Delta + omega^2 |x|^2)^(-1)``: ``b(sqrt(omega) x, xi/sqrt(omega)) / omega``."""
    X = as_phase_point(X, d)
    prec = as_precision(prec)
    t = scaled_radial(omega, X)
    ev = c(d, t, prec.widened(8))
    ctx = context(prec.bits)
    w = to_mpf(ctx, exact(omega))
    return Evaluation(+ctx.mpf(ev.value) / w, ctx.mpf(ev.err_bound) / w, ev.route)
