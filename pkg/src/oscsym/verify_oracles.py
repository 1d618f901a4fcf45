"""Independent numerical checks of the identities satisfied by ``c_d`` and ``b_d``.

Every check returns a :class:`ResidualReport`. Checks are deterministic: the
same parameters, precision and grid reproduce the same ``max_residual``.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .asymptotics import c_asymptotic, error_order_probe, optimal_terms
from .errors import DivergenceFloor, DomainError, NonConvergent, Stiffness, TailBoundLoose
from .even_closed_form import recursion_cross_check
from .odd_special import bessel_residual, laplace_F
from .precision import Precision, as_precision, context, exact, to_mpf
from .radial_core import double_factorial, series_value, stack_residuals
from .symbol_api import PhasePoint, b_scaled, c, c_stack, partial_derivative, radial_rep

ABEL_LADDER = (0.08, 0.04, 0.02, 0.01)
LAPLACE_T_MAX = 200.0


def default_tolerance(prec) -> float:
    bits = as_precision(prec).bits
    return 1e-12 if bits <= 64 else 2.0 ** (-bits / 2)


@dataclass
class ResidualReport:
    check: str
    params: dict
    max_residual: float
    fitted: list = field(default_factory=list)
    tolerance: float = 0.0
    passed: bool = False
    runtime_s: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _report(check, params, max_residual, tolerance, started, fitted=(), passed=None):
    mr = float(max_residual)
    if passed is None:
        passed = mr <= tolerance
    return ResidualReport(check, params, mr, [float(f) for f in fitted], float(tolerance),
                          bool(passed), round(time.perf_counter() - started, 6))


def default_t_grid(t_max=50.0, step=0.1):
    n = int(round(t_max / step))
    return [Fraction(i) * Fraction(str(step)) for i in range(n + 1)]


def random_phase_points(d, count=100, radius=5.0, seed=0, shell=False):
    """Seeded points uniformly in the ball (or on the sphere) of ``R^{2d}``."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        v = rng.standard_normal(2 * d)
        v /= np.linalg.norm(v)
        r = radius if shell else radius * rng.random() ** (1.0 / (2 * d))
        pts.append(PhasePoint(tuple(float(x) for x in v * r)))
    return pts


# ---------------------------------------------------------------- ODE / PDE


def ode_residual(d, t_grid=None, prec=53, tolerance=None) -> ResidualReport:
    """``max |-t c'' - d c' + t c - 1|`` over the grid, stacks from the dispatched route."""
    started = time.perf_counter()
    prec = as_precision(prec)
    t_grid = default_t_grid() if t_grid is None else t_grid
    tolerance = default_tolerance(prec) if tolerance is None else tolerance
    worst = 0.0
    for t in t_grid:
        s = c_stack(d, t, 2, prec)
        worst = max(worst, float(abs(stack_residuals(s)[0])))
    params = {"d": d, "bits": prec.bits, "t_min": float(min(t_grid)), "t_max": float(max(t_grid)),
              "points": len(t_grid)}
    return _report("ode", params, worst, tolerance, started)


def _unit(i, n):
    return tuple(1 if j == i else 0 for j in range(n))


def pde_residual(d, X_grid=None, prec=53, tolerance=None) -> ResidualReport:
    """``|X|^2 b - Delta b / 4 - 1`` and the Poisson-bracket term over phase points.

    ``fitted`` holds ``[max PDE residual, max bracket]``; both must meet the tolerance.
    """
    started = time.perf_counter()
    prec = as_precision(prec)
    X_grid = random_phase_points(d) if X_grid is None else X_grid
    tolerance = default_tolerance(prec) if tolerance is None else tolerance
    ctx = context(prec.bits)
    n = 2 * d
    worst_pde = worst_br = 0.0
    for X in X_grid:
        X = X if isinstance(X, PhasePoint) else PhasePoint(tuple(X))
        b0 = partial_derivative(d, (0,) * n, X, prec).value
        lap = ctx.fsum(partial_derivative(d, tuple(2 * e for e in _unit(i, n)), X, prec).value
                       for i in range(n))
        t = to_mpf(ctx, X.radial)
        worst_pde = max(worst_pde, float(abs(t * b0 - lap / 4 - 1)))
        grads = [partial_derivative(d, _unit(i, n), X, prec).value for i in range(n)]
        xs = [to_mpf(ctx, exact(v)) for v in X.coords]
        br = ctx.fsum(xs[j] * grads[d + j] - xs[d + j] * grads[j] for j in range(d))
        worst_br = max(worst_br, float(abs(br)))
    params = {"d": d, "bits": prec.bits, "points": len(X_grid)}
    return _report("pde", params, max(worst_pde, worst_br), tolerance, started,
                   fitted=[worst_pde, worst_br])


def scaled_pde_residual(d, omega, X_grid=None, prec=53, tolerance=None) -> ResidualReport:
    """Residual of ``(w^2|x|^2 + |xi|^2) b_w - (w^2 Delta_xi b_w + Delta_x b_w)/4 = 1``.

    Second derivatives come from central differences of :func:`b_scaled`
    on an exact dyadic step at widened precision, independent of the
    chain-rule machinery used elsewhere.
    """
    started = time.perf_counter()
    prec = as_precision(prec)
    X_grid = random_phase_points(d, 50, 4.0, seed=1) if X_grid is None else X_grid
    tolerance = default_tolerance(prec) if tolerance is None else tolerance
    work = Precision(max(2 * prec.bits, 192))
    ctx = context(work.bits)
    h = Fraction(1, 2 ** (work.bits // 4))
    w = exact(omega)
    n = 2 * d
    worst = 0.0
    for X in X_grid:
        X = X if isinstance(X, PhasePoint) else PhasePoint(tuple(X))
        base = [exact(v) for v in X.coords]
        f0 = b_scaled(d, omega, PhasePoint(tuple(base)), work).value
        lap_x = lap_xi = ctx.mpf(0)
        for i in range(n):
            up = list(base); up[i] += h
            dn = list(base); dn[i] -= h
            second = (b_scaled(d, omega, PhasePoint(tuple(up)), work).value
                      - 2 * f0 + b_scaled(d, omega, PhasePoint(tuple(dn)), work).value) / to_mpf(ctx, h * h)
            if i < d:
                lap_x += second
            else:
                lap_xi += second
        sym = to_mpf(ctx, w * w * sum((v * v for v in base[:d]), Fraction(0))
                     + sum((v * v for v in base[d:]), Fraction(0)))
        wm = to_mpf(ctx, w)
        res = sym * f0 - (wm * wm * lap_xi + lap_x) / 4 - 1
        worst = max(worst, float(abs(res)))
    params = {"d": d, "omega": float(omega), "bits": prec.bits, "points": len(X_grid)}
    return _report("scaled-pde", params, worst, tolerance, started)


def recursion_residual(d_max=10, t_grid=None, prec=128, tolerance=None) -> ResidualReport:
    """Both dimension recursions for ``3 <= d <= d_max``, plus ``c_3(0) = pi/4``."""
    started = time.perf_counter()
    prec = as_precision(prec)
    if d_max < 3:
        raise DomainError("d_max must be >= 3")
    t_grid = default_t_grid(20.0, 0.5) if t_grid is None else t_grid
    tolerance = default_tolerance(prec) if tolerance is None else tolerance
    per_dim = []
    for d in range(3, d_max + 1):
        worst = 0.0
        for t in t_grid:
            r1, r2 = recursion_cross_check(d, t, prec)
            worst = max(worst, float(r1), float(r2))
        per_dim.append(worst)
    ctx = context(prec.bits)
    spot = float(abs(c(3, 0, prec).value - ctx.pi / 4))
    params = {"d_max": d_max, "bits": prec.bits, "t_min": float(min(t_grid)),
              "t_max": float(max(t_grid)), "points": len(t_grid)}
    return _report("recursion", params, max(per_dim + [spot]), tolerance, started,
                   fitted=per_dim + [spot])


# ---------------------------------------------------------------- Laplace


def _c1(t):
    return float(c(1, t, 53).value)


def laplace_quadrature(s, tol=1e-10):
    """``int_0^inf c_1(t) e^{-st} dt`` and the tail bound that was used.

    The tail past ``T`` is bounded with ``c_1(t) <= C/(1+t)``, ``C`` the
    supremum of ``(1+t) c_1(t)`` on ``[0, 60]``.
    """
    C = _decay_constant()
    T = 1.0
    while C * math.exp(-s * T) / (s * (1 + T)) > tol / 100 and T < LAPLACE_T_MAX:
        T = min(T * 1.25, LAPLACE_T_MAX)
    tail = C * math.exp(-s * T) / (s * (1 + T))
    if tail > tol:
        raise TailBoundLoose(f"tail {tail:.3g} exceeds tolerance {tol:.3g}")
    pieces = np.unique(np.concatenate([[0.0], np.geomspace(0.5, T, 12)]))
    total = 0.0
    for a, b_ in zip(pieces[:-1], pieces[1:]):
        val, _ = integrate.quad(lambda t: _c1(t) * math.exp(-s * t), a, b_,
                                epsabs=tol / 100, epsrel=1e-13, limit=200)
        total += val
    return total, tail, C


@lru_cache(maxsize=1)
def _decay_constant():
    return max((1 + t) * _c1(t) for t in np.linspace(0.0, 60.0, 241))


def laplace_residual(s_values=(1.2, 1.5, 2.0, 3.0), prec=53, tolerance=1e-8) -> ResidualReport:
    """Quadrature of ``c_1 e^{-st}`` against the closed-form transform."""
    started = time.perf_counter()
    worst, fitted = 0.0, []
    C = None
    for s in s_values:
        q, tail, C = laplace_quadrature(float(s), tolerance)
        diff = abs(q - float(laplace_F(s, prec)))
        fitted.append(diff)
        worst = max(worst, diff + tail)
    params = {"s_values": [float(s) for s in s_values], "bits": as_precision(prec).bits,
              "decay_constant": C}
    return _report("laplace", params, worst, tolerance, started, fitted=fitted)


def laplace_limit(s=50, prec=53, tolerance=1e-3) -> ResidualReport:
    """``s F(s) -> c_1(0) = pi/2`` at a large ``s``."""
    started = time.perf_counter()
    ctx = context(as_precision(prec).bits)
    r = abs(to_mpf(ctx, exact(s)) * laplace_F(s, prec) - ctx.pi / 2)
    return _report("laplace-limit", {"s": float(s)}, r, tolerance, started)


# ---------------------------------------------------------------- Gevrey


@lru_cache(maxsize=16)
def derivative_table(d, t_grid: tuple, kmax, bits):
    """``|c_d^(k)(t)|`` as floats, rows over the grid, columns ``k = 0..kmax``."""
    rows = []
    for t in t_grid:
        s = c_stack(d, t, kmax, bits)
        rows.append([abs(float(v)) for v in s.values])
    return np.array(rows)


def gevrey_constants(d, s, k_max=16, t_grid=None, prec=128):
    """``C_k = (sup_t |c^(k)(t)| (1+t)^(1+sk) / (k!)^((1+s)/2))^(1/(k+1))``."""
    t_grid = tuple(default_t_grid(50.0, 0.125)) if t_grid is None else tuple(t_grid)
    table = derivative_table(d, t_grid, k_max, as_precision(prec).bits)
    ts = np.array([float(t) for t in t_grid])
    out = []
    for k in range(k_max + 1):
        weight = (1 + ts) ** (1 + s * k) / math.exp(0.5 * (1 + s) * math.lgamma(k + 1))
        m_k = float(np.max(table[:, k] * weight))
        out.append(m_k ** (1.0 / (k + 1)))
    return out


def gevrey_fit(d, s, k_max=16, t_grid=None, prec=128, k_min=4, max_ratio=10.0) -> ResidualReport:
    """Geometric stability of the fitted derivative constants.

    Passes iff ``max C_k / min C_k <= max_ratio`` over ``k_min <= k <= k_max``.
    ``max_residual`` carries that ratio.
    """
    started = time.perf_counter()
    if not 0 <= s <= 1:
        raise DomainError("s must lie in [0, 1]")
    if k_max > 24:
        raise DomainError("k_max must be <= 24")
    consts = gevrey_constants(d, s, k_max, t_grid, prec)
    window = consts[k_min:]
    ratio = max(window) / min(window)
    params = {"d": d, "s": float(s), "k_max": k_max, "bits": as_precision(prec).bits}
    return _report("gevrey", params, ratio, max_ratio, started, fitted=consts)


def multi_indices(n_slots, order):
    """All multi-indices over ``n_slots`` coordinates with total order ``order``."""
    if n_slots == 1:
        yield (order,)
        return
    for first in range(order, -1, -1):
        for rest in multi_indices(n_slots - 1, order - first):
            yield (first,) + rest


def symbol_estimate_constants(d, s, order_max=10, X_grid=None, prec=53):
    """Per-order constants of the symbol estimates, ``C_n^(1/(n+1))`` for ``n <= order_max``.

    ``C_n = max |d^alpha b(X)| <X>^(2 + s|alpha|) / (alpha!)^((1+s)/2)`` over
    ``|alpha| = n`` and the grid, with ``<X> = (1 + |X|^2)^(1/2)``.
    """
    X_grid = random_phase_points(d, 60, 10.0, seed=2) if X_grid is None else X_grid
    reps = {n: [(a, radial_rep(a)) for a in multi_indices(2 * d, n)] for n in range(order_max + 1)}
    best = [0.0] * (order_max + 1)
    for X in X_grid:
        X = X if isinstance(X, PhasePoint) else PhasePoint(tuple(X))
        stack = [float(v) for v in c_stack(d, X.radial, order_max, prec).values]
        coords = [float(v) for v in X.coords]
        bracket = math.sqrt(1.0 + float(X.radial))
        for n, items in reps.items():
            weight = bracket ** (2 + s * n)
            for alpha, rep in items:
                xs = [coords[i] for i in rep.variables]
                val = 0.0
                for k, poly in rep.terms.items():
                    pk = 0.0
                    for exps, coef in poly.items():
                        term = float(coef)
                        for x, e in zip(xs, exps):
                            if e:
                                term *= x ** e
                        pk += term
                    val += pk * stack[k]
                fact = math.prod(math.factorial(a) for a in alpha)
                best[n] = max(best[n], abs(val) * weight / fact ** ((1 + s) / 2))
    return [m ** (1.0 / (n + 1)) for n, m in enumerate(best)]


def symbol_estimate_fit(d=2, s=1.0, order_max=10, X_grid=None, prec=53, max_ratio=3.0) -> ResidualReport:
    """Stability of :func:`symbol_estimate_constants` across orders ``0..order_max``."""
    started = time.perf_counter()
    consts = symbol_estimate_constants(d, s, order_max, X_grid, prec)
    ratio = max(consts) / min(consts)
    params = {"d": d, "s": float(s), "order_max": order_max}
    return _report("symbol-estimate", params, ratio, max_ratio, started, fitted=consts)


# ---------------------------------------------------------------- asymptotics


def geometric_grid(t_min, t_max, count):
    return [Fraction(float(t)).limit_denominator(2 ** 20) for t in np.geomspace(t_min, t_max, count)]


def asym_order(d, N, t_grid=None, prec=256, slope_tol=0.15) -> ResidualReport:
    """Fitted log-log slope of the truncation remainder against ``-(1 + 2N)``.

    For even ``d`` with ``N >= d/2`` the remainder is exponentially small and
    the check passes when the probe reports the exponential regime.
    """
    started = time.perf_counter()
    t_grid = asym_grid(N) if t_grid is None else t_grid
    probe = error_order_probe(d, N, t_grid, prec=prec)
    expected = -(1 + 2 * N)
    params = {"d": d, "N": N, "t_min": float(min(t_grid)), "t_max": float(max(t_grid)),
              "bits": as_precision(prec).bits, "regime": probe.regime}
    if d % 2 == 0 and N >= d // 2:
        return _report("asym-order", params, probe.exp_rate, -0.5, started,
                       fitted=[probe.slope, probe.exp_rate], passed=probe.regime == "exponential")
    dev = abs(probe.slope - expected)
    return _report("asym-order", params, dev, slope_tol, started,
                   fitted=[probe.slope, expected, probe.exp_rate])


# ---------------------------------------------------------------- special functions


def dyadic_blocks(t_min, t_max):
    edges = [float(t_min)]
    while edges[-1] * 2 < t_max:
        edges.append(edges[-1] * 2)
    edges.append(float(t_max))
    return list(zip(edges[:-1], edges[1:]))


def bessel_bound(n, t_min=1, t_max=40, points_per_unit=4, prec=512, normalized=False,
                 growth=2.0) -> ResidualReport:
    """Boundedness of ``(1+t) |w_n(t) - (pi/2) u_n(t^2/4)|`` on dyadic blocks.

    Passes iff the block maxima never grow by more than ``growth`` from one
    block to the next. ``fitted`` lists the block maxima.
    """
    started = time.perf_counter()
    count = int((t_max - t_min) * points_per_unit) + 1
    grid = [Fraction(t_min) + Fraction(i, points_per_unit) for i in range(count)]
    vals = []
    for t in grid:
        r = bessel_residual(n, t, 0, prec, normalized=normalized)[0]
        vals.append((float(t), float((1 + t) * abs(r))))
    maxima = []
    for lo, hi in dyadic_blocks(t_min, t_max):
        inside = [v for t, v in vals if lo <= t <= hi]
        maxima.append(max(inside))
    factors = [b_ / a for a, b_ in zip(maxima[:-1], maxima[1:])]
    worst = max(factors) if factors else 0.0
    params = {"n": n, "t_min": t_min, "t_max": t_max, "bits": as_precision(prec).bits,
              "normalized": normalized}
    return _report("bessel", params, worst, growth, started, fitted=maxima)


# ---------------------------------------------------------------- spectral oracle


def abel_sums(t, eps_sequence=ABEL_LADDER, n_terms=None):
    """Damped partial sums ``S(eps) = sum_m 2 (-1)^m L_m(2t) e^{-t} e^{-eps m} / (2m+1)``."""
    eps = np.asarray(eps_sequence, dtype=float)
    if n_terms is None:
        n_terms = int(math.ceil(45.0 / eps.min()))
    x = 2.0 * float(t)
    m = np.arange(n_terms)
    lag = np.empty(n_terms)
    lag[0] = 1.0
    if n_terms > 1:
        lag[1] = 1.0 - x
    for k in range(1, n_terms - 1):
        lag[k + 1] = ((2 * k + 1 - x) * lag[k] - k * lag[k - 1]) / (k + 1)
    base = 2.0 * (-1.0) ** m * lag * math.exp(-float(t)) / (2 * m + 1)
    return np.array([math.fsum(base * np.exp(-e * m)) for e in eps])


def _neville_at_zero(xs, ys):
    p = list(ys)
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            p[i] = (xs[i + level] * p[i] - xs[i] * p[i + 1]) / (xs[i + level] - xs[i])
    return p[0]


def spectral_oracle_c1(t, n_terms=None, abel_eps_sequence=ABEL_LADDER, prec=53, spread=1e-2):
    """Abel-summed Laguerre (Wigner eigenprojection) reconstruction of ``c_1(t)``.

    The sum is damped by ``e^{-eps m}`` for each ``eps`` of the ladder and
    polynomially extrapolated to ``eps = 0``.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    eps = list(abel_eps_sequence)
    raw = abel_sums(t, eps, n_terms)
    full = _neville_at_zero(eps, raw)
    partial = _neville_at_zero(eps[:-1], raw[:-1])
    if not math.isfinite(full) or abs(full - partial) > spread:
        raise NonConvergent(f"Abel extrapolation unstable at t={float(t):g}", raw=list(raw))
    return full


def spectral_check(t_grid=None, tolerance=1e-3, zero_tol=1e-8) -> ResidualReport:
    """Spectral reconstruction of ``c_1`` on a grid, plus recovery of ``pi/2`` at ``t = 0``.

    The ``t = 0`` value is held to ``zero_tol``, the size of the ladder's
    extrapolation error.
    """
    started = time.perf_counter()
    t_grid = [0.5 + 0.25 * i for i in range(19)] if t_grid is None else t_grid
    diffs = [abs(spectral_oracle_c1(t) - float(c(1, t, 53).value)) for t in t_grid]
    at_zero = abs(spectral_oracle_c1(0.0) - math.pi / 2)
    params = {"t_min": float(min(t_grid)), "t_max": float(max(t_grid)), "points": len(t_grid),
              "ladder": list(ABEL_LADDER)}
    return _report("spectral", params, max(diffs + [at_zero]), tolerance, started,
                   fitted=[max(diffs), at_zero],
                   passed=max(diffs) <= tolerance and at_zero <= zero_tol)


# ---------------------------------------------------------------- shooting oracle


@dataclass(frozen=True)
class ShootingResult:
    """Bounded solution ``c = P + a0 Q`` reconstructed by forward Taylor stepping.

    ``P`` solves the inhomogeneous equation with ``P(0) = 0``; ``Q`` solves
    the homogeneous one with ``Q(0) = 1``. ``a0`` is fixed by matching the
    asymptotic value at ``t_far``.
    """

    dim: int
    t_far: object
    c0: object
    alpha: object
    bits: int
    segments: tuple
    steps: int

    def _segment(self, t):
        for seg in self.segments:
            t0, h = seg[0], seg[1]
            if t0 <= t <= t0 + h:
                return seg
        raise DomainError(f"t={float(t):g} outside [0, {float(self.t_far):g}]")

    def value(self, t, order=0):
        ctx = context(self.bits)
        t = to_mpf(ctx, exact(t))
        t0, _, pc, qc = self._segment(t)
        s = t - t0
        acc = ctx.mpf(0)
        for m in range(len(pc) - 1, order - 1, -1):
            acc = acc * s + (pc[m] + self.c0 * qc[m]) * math.factorial(m) / math.factorial(m - order)
        return acc

    def __call__(self, t):
        return self.value(t)


def _taylor_coeffs(t0, h, y0, y1, inhom, d, ctx, tol, cap):
    """Local Taylor coefficients of ``t y'' + d y' - t y = -inhom`` about ``t0``."""
    y = [y0, y1]
    scale = max(abs(y0), abs(y1) * h, ctx.mpf(1))
    hp = h
    m = 0
    small = 0
    while True:
        if t0 == 0:
            nxt = y[m] / ((m + 2) * (m + 1 + d))
        else:
            prev = y[m - 1] if m >= 1 else 0
            nxt = (t0 * y[m] + prev - (m + 1) * (m + d) * y[m + 1] - (inhom if m == 0 else 0)) \
                / (t0 * (m + 2) * (m + 1))
        y.append(nxt)
        m += 1
        hp *= h
        if abs(nxt) * hp * h < tol * scale:
            small += 1
            if small >= 3:
                return y
        else:
            small = 0
        if m > cap:
            return None


def ode_shooting_oracle(d, t_far=40, prec=256, h_max=4.0, h_floor=1e-6) -> ShootingResult:
    """Solve for the bounded solution of ``-t c'' - d c' + t c = 1`` by shooting.

    Two solutions are carried from ``t = 0`` to ``t_far`` with adaptive Taylor
    steps (step at most half the distance to the singular point ``t = 0``,
    order grown until the local tail falls under ``2^-bits``). The constant
    ``c(0)`` is then the unique value whose trajectory meets the optimally
    truncated asymptotic expansion at ``t_far``.
    """
    if t_far < 30:
        raise DomainError("t_far must be >= 30")
    prec = as_precision(prec)
    ctx = context(prec.bits)
    tol = ctx.ldexp(1, -prec.bits - 8)
    cap = 8 * prec.bits
    t0 = ctx.mpf(0)
    far = to_mpf(ctx, exact(t_far))
    p_state = (ctx.mpf(0), ctx.mpf(-1) / d)
    q_state = (ctx.mpf(1), ctx.mpf(0))
    segments = []
    h = ctx.mpf(1)
    steps = 0
    while t0 < far:
        if t0 > 0:
            h = min(ctx.mpf(h_max), t0 / 2, h * 2)
        h = min(h, far - t0)
        while True:
            if h < h_floor:
                raise Stiffness(f"step collapsed to {float(h):.3g} at t={float(t0):g}")
            pc = _taylor_coeffs(t0, h, p_state[0], p_state[1], 1, d, ctx, tol, cap)
            qc = _taylor_coeffs(t0, h, q_state[0], q_state[1], 0, d, ctx, tol, cap)
            if pc is not None and qc is not None:
                break
            h /= 2
        n = max(len(pc), len(qc))
        pc = pc + [ctx.mpf(0)] * (n - len(pc))
        qc = qc + [ctx.mpf(0)] * (n - len(qc))
        segments.append((t0, h, tuple(pc), tuple(qc)))
        p_state = (_poly(pc, h, 0, ctx), _poly(pc, h, 1, ctx))
        q_state = (_poly(qc, h, 0, ctx), _poly(qc, h, 1, ctx))
        t0 = t0 + h
        steps += 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DivergenceFloor)
        target, _ = c_asymptotic(d, optimal_terms(d, float(far)), far, prec)
    a0 = (target - p_state[0]) / q_state[0]
    alpha = a0 * d * double_factorial(d - 1) / double_factorial(d)
    return ShootingResult(d, far, a0, alpha, prec.bits, tuple(segments), steps)


def _poly(coeffs, s, order, ctx):
    acc = ctx.mpf(0)
    for m in range(len(coeffs) - 1, order - 1, -1):
        acc = acc * s + coeffs[m] * (m if order == 1 else 1)
    return acc


def shooting_check(d, t_far=40, prec=256, t_compare=20, tolerance=1e-9, endpoint_tol=1e-6,
                   perturbation=1e-3, sensitivity_floor=1e-4) -> ResidualReport:
    """Shooting oracle against the series route and the known ``c_d(0)``.

    ``fitted`` = ``[|c0 - a0|, max trajectory gap on [0, t_compare],
    gap after perturbing alpha]``. Passes when the first two are within
    their tolerances and the perturbed gap exceeds ``sensitivity_floor``.
    """
    started = time.perf_counter()
    prec = as_precision(prec)
    res = ode_shooting_oracle(d, t_far, prec)
    ctx = context(prec.bits)
    a0 = ctx.mpf(1) if d % 2 == 0 else ctx.pi / 2
    a0 = a0 * double_factorial(d) / (d * double_factorial(d - 1))
    endpoint = float(abs(res.c0 - a0))
    grid = [Fraction(i, 2) for i in range(2 * t_compare + 1)]
    gap = max(float(abs(res(t) - c(d, t, 128).value)) for t in grid)
    alpha = ctx.mpf(1) if d % 2 == 0 else ctx.pi / 2
    pert = max(float(abs(res(t) - series_value(d, t, 128, alpha=alpha + perturbation)[0])) for t in grid)
    passed = endpoint <= endpoint_tol and gap <= tolerance and pert >= sensitivity_floor
    params = {"d": d, "t_far": float(t_far), "bits": prec.bits, "t_compare": t_compare,
              "steps": res.steps}
    return _report("shooting", params, max(endpoint, gap), tolerance, started,
                   fitted=[endpoint, gap, pert, float(res.alpha)], passed=passed)


# ---------------------------------------------------------------- batch


CHECKS = ("ode", "pde", "scaled-pde", "recursion", "laplace", "gevrey", "asym-order",
          "bessel", "spectral", "shooting")


def plan(check, bits=256, dim=None, dmax=10, s=None, kmax=16, omega=None, terms=None):
    """Jobs ``(callable, kwargs)`` for one named check or for ``all``.

    ``bits`` applies to the checks that run at a chosen precision; the
    Laplace and spectral checks are double-precision by construction and the
    Bessel check needs at least 512 bits.
    """
    if check == "all":
        jobs = []
        for name in CHECKS:
            jobs.extend(plan(name, bits, dim, dmax, s, kmax, omega, terms))
        return jobs
    if check not in CHECKS:
        raise DomainError(f"unknown check {check!r}")
    if check == "ode":
        return [(ode_residual, {"d": d, "prec": bits}) for d in ([dim] if dim else range(1, 9))]
    if check == "pde":
        return [(pde_residual, {"d": d, "prec": bits}) for d in ([dim] if dim else (1, 2, 3, 4))]
    if check == "scaled-pde":
        return [(scaled_pde_residual, {"d": d, "omega": w, "prec": bits})
                for d in ([dim] if dim else (1, 2)) for w in ([omega] if omega else (0.5, 2.0))]
    if check == "recursion":
        return [(recursion_residual, {"d_max": dmax, "prec": bits})]
    if check == "laplace":
        return [(laplace_residual, {}), (laplace_limit, {})]
    if check == "gevrey":
        return [(gevrey_fit, {"d": d, "s": x, "k_max": kmax, "prec": bits})
                for d in ([dim] if dim else (2, 3)) for x in ([s] if s is not None else (0.0, 0.5, 1.0))]
    if check == "asym-order":
        return [(asym_order, {"d": d, "N": n, "t_grid": asym_grid(n), "prec": bits})
                for d in ([dim] if dim else (3, 5)) for n in ([terms] if terms else (1, 2, 3, 4))]
    if check == "bessel":
        if dim is not None and dim % 2 == 0:
            raise DomainError("bessel check needs odd --dim")
        ns = [(dim - 1) // 2] if dim else (0, 1, 2)
        return [(bessel_bound, {"n": n, "prec": max(bits, 512)}) for n in ns]
    if check == "spectral":
        return [(spectral_check, {})]
    return [(shooting_check, {"d": d, "prec": bits}) for d in ([dim] if dim else (1, 2, 3, 5))]


def asym_grid(N):
    """Geometric grid on which ``N``-term remainders are past their transient."""
    lo = 10.0 * max(1, N)
    return geometric_grid(lo, 10 * lo, 24)


def _run(job):
    fn, kwargs = job
    return fn(**kwargs)


def run_checks(jobs, workers=1):
    """Run jobs, concurrently when ``workers > 1``; reports keep the job order."""
    if workers <= 1:
        return [_run(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run, jobs))
