"""Command line front end: ``oscsym {eval,table,derivs,asym,verify,report}``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from contextlib import contextmanager
from fractions import Fraction

from . import verify_oracles as vo
from .asymptotics import c_asymptotic, error_order_probe
from .errors import DivergenceFloor, DomainError, OscsymError, PrecisionExhausted, RepOverflow
from .precision import context, exact
from .symbol_api import PhasePoint, b, c, c_stack, partial_derivative

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_PRECISION, EXIT_IO = 0, 1, 2, 3, 4

DEFAULT_BITS = {"eval": 128, "table": 128, "derivs": 128, "asym": 256, "verify": 256, "report": 256}


class Formatter:
    """Shortest round-trip decimal at 53 bits, ``floor(bits log10 2)`` digits above."""

    def __init__(self, bits: int):
        self.bits = bits
        self.digits = int(bits * math.log10(2))
        self.ctx = context(bits)

    def __call__(self, x) -> str:
        if self.bits == 53:
            return repr(float(x))
        if isinstance(x, Fraction):
            x = self.ctx.mpf(x.numerator) / x.denominator
        return self.ctx.nstr(self.ctx.mpf(x), self.digits)


def _number(text: str):
    try:
        return exact(text)
    except (ValueError, ArithmeticError) as e:
        raise DomainError(f"not a number: {text!r}") from e


def _point(text: str) -> PhasePoint:
    parts = [p for p in text.split(",") if p.strip()]
    return PhasePoint(tuple(_number(p.strip()) for p in parts))


def _multi_index(text: str):
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as e:
        raise DomainError(f"bad multi-index {text!r}") from e


def _bits(args) -> int:
    if args.bits is not None:
        bits = args.bits
    elif os.environ.get("OSCSYM_BITS"):
        try:
            bits = int(os.environ["OSCSYM_BITS"])
        except ValueError as e:
            raise DomainError("OSCSYM_BITS must be an integer") from e
    else:
        bits = DEFAULT_BITS[args.verb]
    if bits < 53:
        raise DomainError(f"precision must be at least 53 bits, got {bits}")
    return bits


@contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        yield fh


def _json_record(fields) -> str:
    # flat records with preformatted numeric literals
    body = ", ".join(f"{json.dumps(k)}: {v}" for k, v in fields)
    return "{" + body + "}"


def _require_dim(args):
    if args.dim is None:
        raise DomainError("--dim is required")
    if args.dim < 1:
        raise DomainError("--dim must be >= 1")


def run_eval(args) -> int:
    _require_dim(args)
    bits = _bits(args)
    if (args.t is None) == (args.point is None):
        raise DomainError("give exactly one of --t and --point")
    if args.t is not None:
        ev = c(args.dim, _number(args.t), bits)
    else:
        ev = b(args.dim, _point(args.point), bits)
    fmt = Formatter(bits)
    with _sink(args.output) as out:
        if args.format == "json":
            out.write(_json_record([("value", fmt(ev.value)), ("err_bound", fmt(ev.err_bound)),
                                    ("route", json.dumps(ev.route.route))]) + "\n")
        else:
            out.write(f"{fmt(ev.value)} err_bound={fmt(ev.err_bound)} route={ev.route.route}\n")
    return EXIT_OK


def table_grid(tmin, tmax, steps):
    if steps < 2:
        raise DomainError("--steps must be >= 2")
    if tmin < 0 or tmax < tmin:
        raise DomainError("need 0 <= tmin <= tmax")
    return [tmin + (tmax - tmin) * Fraction(i, steps - 1) for i in range(steps)]


TEXT_COLUMNS = {"route", "alpha"}


def _json_row(header, row) -> str:
    return _json_record([(h, json.dumps(v) if h in TEXT_COLUMNS else v) for h, v in zip(header, row)])


def _write_rows(out, header, rows, fmt_json):
    if fmt_json:
        out.write("[\n")
        for i, row in enumerate(rows):
            sep = "," if i < len(rows) - 1 else ""
            out.write("  " + _json_row(header, row) + sep + "\n")
        out.write("]\n")
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def run_table(args) -> int:
    _require_dim(args)
    bits = _bits(args)
    grid = table_grid(_number(args.tmin), _number(args.tmax), args.steps)
    fmt = Formatter(bits)
    rows = []
    for t in grid:
        ev = c(args.dim, t, bits)
        rows.append((fmt(t), fmt(ev.value), fmt(ev.err_bound), ev.route.route))
    with _sink(args.output) as out:
        _write_rows(out, ("t", "c", "err_bound", "route"), rows, args.format == "json")
    return EXIT_OK


def run_derivs(args) -> int:
    _require_dim(args)
    bits = _bits(args)
    fmt = Formatter(bits)
    if args.order is not None:
        if args.point is None:
            raise DomainError("--order needs --point")
        alpha = _multi_index(args.order)
        ev = partial_derivative(args.dim, alpha, _point(args.point), bits)
        rows = [(",".join(map(str, alpha)), fmt(ev.value), fmt(ev.err_bound), ev.route.route)]
        header = ("alpha", "value", "err_bound", "route")
    else:
        if (args.t is None) == (args.point is None):
            raise DomainError("give exactly one of --t and --point")
        t = _number(args.t) if args.t is not None else _point(args.point).radial
        stack = c_stack(args.dim, t, args.kmax, bits)
        rows = [(str(k), fmt(v), fmt(e), stack.route)
                for k, (v, e) in enumerate(zip(stack.values, stack.err_bounds))]
        header = ("k", "value", "err_bound", "route")
    with _sink(args.output) as out:
        _write_rows(out, header, rows, args.format == "json")
    return EXIT_OK


def run_asym(args) -> int:
    _require_dim(args)
    bits = _bits(args)
    if args.terms is None or args.terms < 1:
        raise DomainError("--terms must be >= 1")
    tmin = _number(args.tmin) if args.tmin is not None else Fraction(10)
    tmax = _number(args.tmax) if args.tmax is not None else Fraction(100)
    if tmin <= 0 or tmax <= tmin or args.steps < 3:
        raise DomainError("need 0 < tmin < tmax and --steps >= 3")
    grid = vo.geometric_grid(float(tmin), float(tmax), args.steps)
    fmt = Formatter(bits)
    ref = {}

    def reference(t):
        if t not in ref:
            ev = c(args.dim, t, bits)
            ref[t] = (ev.value, ev.err_bound)
        return ref[t]

    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DivergenceFloor)
        for t in grid:
            approx, _ = c_asymptotic(args.dim, args.terms, t, bits)
            value, _ = reference(t)
            rows.append((fmt(t), fmt(approx), fmt(value), fmt(abs(value - approx))))
    probe = error_order_probe(args.dim, args.terms, grid, reference=reference, prec=bits)
    fit = {"slope": round(probe.slope, 6), "expected": -(1 + 2 * args.terms),
           "regime": probe.regime, "points_used": int(sum(probe.used))}
    with _sink(args.output) as out:
        header = ("t", "asym", "reference", "abs_err")
        if args.format == "json":
            out.write('{"rows": [\n')
            for i, row in enumerate(rows):
                sep = "," if i < len(rows) - 1 else ""
                out.write("  " + _json_row(header, row) + sep + "\n")
            out.write('], "fit": ' + json.dumps(fit) + "}\n")
        else:
            _write_rows(out, header, rows, False)
            out.write("# " + json.dumps(fit) + "\n")
    return EXIT_OK


def _reports(args):
    bits = _bits(args)
    jobs = vo.plan(args.check, bits, dim=args.dim, dmax=args.dmax, s=args.s, kmax=args.kmax,
                   omega=args.omega, terms=args.terms)
    return vo.run_checks(jobs, args.jobs)


def _stable_json(report, with_runtime: bool) -> str:
    d = report.to_dict()
    if not with_runtime:
        d.pop("runtime_s")
    return json.dumps(d)


def run_verify(args) -> int:
    reports = _reports(args)
    with _sink(args.output) as out:
        for r in reports:
            out.write(_stable_json(r, not args.no_runtime) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def run_report(args) -> int:
    reports = _reports(args)
    with _sink(args.output) as out:
        out.write(f"{'check':<16}{'status':<8}{'max_residual':>14}{'tolerance':>12}  params\n")
        for r in reports:
            status = "pass" if r.passed else "FAIL"
            params = ", ".join(f"{k}={v}" for k, v in r.params.items())
            out.write(f"{r.check:<16}{status:<8}{r.max_residual:>14.3e}{r.tolerance:>12.3e}  {params}\n")
        failed = sum(not r.passed for r in reports)
        out.write(f"{len(reports) - failed}/{len(reports)} passed\n")
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oscsym", description="Weyl symbol of the inverse harmonic oscillator.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--dim", type=int)
        sp.add_argument("--bits", type=int, help="significand bits (env OSCSYM_BITS)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", "-o")
        return sp

    e = common(sub.add_parser("eval", help="value of c_d(t) or b_d(X)"))
    e.add_argument("--t")
    e.add_argument("--point", help="comma separated x_1..x_d,xi_1..xi_d")

    t = common(sub.add_parser("table", help="tabulate c_d on a uniform grid"))
    t.add_argument("--tmin", default="0")
    t.add_argument("--tmax", required=True)
    t.add_argument("--steps", type=int, default=11)

    dv = common(sub.add_parser("derivs", help="derivative stack or a partial derivative"))
    dv.add_argument("--t")
    dv.add_argument("--point")
    dv.add_argument("--kmax", type=int, default=4)
    dv.add_argument("--order", help="multi-index a_1,...,a_2d for a partial derivative at --point")

    a = common(sub.add_parser("asym", help="asymptotic remainders and fitted decay order"))
    a.add_argument("--terms", type=int, required=True)
    a.add_argument("--tmin")
    a.add_argument("--tmax")
    a.add_argument("--steps", type=int, default=24)

    for verb in ("verify", "report"):
        v = sub.add_parser(verb, help="run identity checks" if verb == "verify" else "summary table of checks")
        v.add_argument("check", choices=vo.CHECKS + ("all",))
        v.add_argument("--dim", type=int)
        v.add_argument("--bits", type=int)
        v.add_argument("--dmax", type=int, default=10)
        v.add_argument("--s", type=float)
        v.add_argument("--kmax", type=int, default=16)
        v.add_argument("--omega", type=float)
        v.add_argument("--terms", type=int)
        v.add_argument("--jobs", type=int, default=1)
        v.add_argument("--output", "-o")
        v.add_argument("--no-runtime", action="store_true", help="omit runtime_s for byte-stable output")
    return p


HANDLERS = {"eval": run_eval, "table": run_table, "derivs": run_derivs, "asym": run_asym,
            "verify": run_verify, "report": run_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return HANDLERS[args.verb](args)
    except (DomainError, RepOverflow) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (PrecisionExhausted, OscsymError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
