"""Command-line front end.

JSON for single results, CSV for series. Exit status: 0 success, 2 usage or
parse error, 3 numerical oracle failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from . import bounds
from .bounds import HolderPair, parse_r
from .calculus import make_integrand
from .errors import OracleNoConvergence, TelequadError
from .exactpoly import bernoulli_number, bernoulli_poly, format_rational
from .quad import Interval, composite_apply
from .reference import reference_integral
from .scheme import SchemeSpec, endpoint_weights, make_scheme
from .witness import sharpness

EXIT_USAGE = 2
EXIT_ORACLE = 3


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _json(obj: dict) -> str:
    return json.dumps(obj, allow_nan=False) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, output: Optional[str]) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)


def _scheme_from_args(args) -> tuple[SchemeSpec, Optional[str]]:
    n = args.degree
    if n < 1:
        raise UsageError(f"--degree must be >= 1, got {n}")
    if args.c is not None:
        return make_scheme(n, Fraction(args.c)), None
    if args.variant == "pn":
        return make_scheme(n, 0), None
    spec = make_scheme(n, -bernoulli_number(n) / factorial(n))
    note = None
    if n >= 3 and n % 2 == 1:
        note = f"qn aliases pn for odd n >= 3 (B_{n} = 0)"
    return spec, note


def _panel_list(text: str) -> list[int]:
    try:
        panels = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad panel list {text!r}")
    if not panels or any(p < 1 for p in panels) or panels != sorted(set(panels)):
        raise UsageError("panel list must be nonempty, positive and strictly ascending")
    return panels


def _r_list(values: Sequence[str]) -> list[float]:
    out = []
    for v in values:
        out.extend(parse_r(t) for t in v.split(",") if t.strip())
    return out


# --------------------------------------------------------------------------
# commands


def cmd_bernoulli(args) -> str:
    if args.number is not None:
        return format_rational(bernoulli_number(args.number)) + "\n"
    return str(bernoulli_poly(args.poly)) + "\n"


def cmd_weights(args) -> str:
    spec, note = _scheme_from_args(args)
    out = endpoint_weights(spec, args.a, args.b).to_json()
    if note:
        out["note"] = note
    return _json(out)


def _integrand_for(args, order: int):
    return make_integrand(args.expr, order, args.a, args.b)


def _bound_for(spec, f, iv, r_text):
    hp = HolderPair.from_r(r_text)
    fn = bounds.estimate_derivative_norm(f, spec.degree, iv.a, iv.b, hp.s)
    return hp, bounds.composite_error_bound(spec, hp, fn, iv)


def cmd_integrate(args) -> str:
    spec, note = _scheme_from_args(args)
    iv = Interval(args.a, args.b, args.panels)
    n = spec.degree
    f = _integrand_for(args, n if args.bound is not None else n - 1)
    report = composite_apply(spec, f, iv)
    if args.bound is not None:
        hp, bound = _bound_for(spec, f, iv, args.bound)
        report = replace(report, bound=bound, bound_exponents=hp)
        report.extra["bound_is_estimate"] = True
    if args.reference:
        report = report.with_reference(reference_integral(f, iv.a, iv.b, args.tol))
    if note:
        report.extra["note"] = note
    if args.show_derivatives:
        report.extra["derivatives"] = f.derivative_table()
    return _json(report.to_json())


def cmd_convergence(args) -> str:
    spec, _ = _scheme_from_args(args)
    panels = _panel_list(args.panels)
    n = spec.degree
    f = _integrand_for(args, n if args.bound is not None else n - 1)
    ref = reference_integral(f, args.a, args.b, args.tol)
    rows = []
    prev = None
    for N in panels:
        iv = Interval(args.a, args.b, N)
        value = composite_apply(spec, f, iv).value
        err = ref - value
        bound = _bound_for(spec, f, iv, args.bound)[1] if args.bound is not None else None
        order = None
        if prev is not None and prev[1] != 0 and err != 0:
            order = math.log(abs(prev[1]) / abs(err)) / math.log(N / prev[0])
        rows.append([N, value, err, bound, order])
        prev = (N, err)
    return _csv(["N", "value", "actual_error", "bound", "observed_order"], rows)


def cmd_norms(args) -> str:
    spec, _ = _scheme_from_args(args)
    rs = _r_list(args.r)
    records = []
    for r in rs:
        res = bounds.scheme_norm(spec, r)
        records.append(
            {
                "degree": spec.degree,
                "variant": spec.variant.value,
                "r": HolderPair.from_r(r).r_text,
                "value": res.value,
                "exact": res.exact_text,
                "method": res.method,
            }
        )
    fmt = args.format or ("json" if len(records) == 1 else "csv")
    if fmt == "json":
        if len(records) != 1:
            raise UsageError("JSON output takes a single --r value; use --format csv")
        rec = records[0]
        if spec.variant.value == "custom":
            rec["c"] = format_rational(spec.constant)
        return _json(rec)
    header = ["degree", "variant", "r", "value", "exact", "method"]
    return _csv(header, [[rec[h] for h in header] for rec in records])


def cmd_asymptotics(args) -> str:
    kinds = []
    for k in args.kind or ["pn_inf,q2n_inf,pn_1,q2n_1,variation_pn"]:
        kinds.extend(t.strip() for t in k.split(",") if t.strip())
    for k in kinds:
        if k not in bounds.KINDS:
            raise UsageError(f"unknown kind {k!r}; expected one of {', '.join(bounds.KINDS)}")
    if args.n is not None:
        ns = [args.n]
    else:
        ns = list(range(1, args.max_n + 1))
    rs = [int(r) for r in _r_list(args.r)] if args.r else []
    with_r = any(k.startswith("pn_r_") for k in kinds)
    rows = []
    for n in ns:
        for kind in kinds:
            if kind.startswith("pn_r_"):
                want = 0 if kind == "pn_r_even" else 1
                targets = [r for r in rs if r % 2 == want and r >= 2 + want]
                if not targets:
                    raise UsageError(f"{kind} needs a matching integer --r")
            else:
                targets = [None]
            for r in targets:
                exact = bounds.asymptotic_exact(kind, n, r)
                asym = bounds.asymptotic_estimate(kind, n, r)
                row = [n, kind, exact, asym, exact / asym]
                if with_r:
                    row.append(r)
                rows.append(row)
    header = ["n", "kind", "exact", "asymptotic", "ratio"] + (["r"] if with_r else [])
    return _csv(header, rows)


def cmd_sharpness(args) -> str:
    spec, _ = _scheme_from_args(args)
    hp = HolderPair.from_r(args.r)
    res = sharpness(spec, hp, args.a, args.b, grid_size=args.grid, k=args.k)
    return _json(res.to_json())


# --------------------------------------------------------------------------
# parser


def _add_scheme(p: argparse.ArgumentParser) -> None:
    p.add_argument("--degree", "-n", type=int, default=2)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--variant", choices=["pn", "qn"], default="qn")
    g.add_argument("--c", help='constant c as a rational, e.g. "-1/12"')


def _add_interval(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="telequad",
        description="Endpoint-derivative quadrature generated by Bernoulli polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bernoulli", help="exact Bernoulli numbers and polynomials")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--number", type=int, metavar="N")
    g.add_argument("--poly", type=int, metavar="N")
    p.set_defaults(func=cmd_bernoulli)

    p = sub.add_parser("weights", help="endpoint weight table of a scheme")
    _add_scheme(p)
    _add_interval(p)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("integrate", help="composite rule on an expression")
    p.add_argument("--expr", required=True)
    _add_interval(p)
    _add_scheme(p)
    p.add_argument("--panels", "-N", type=int, default=1)
    p.add_argument("--bound", metavar="R", help="Hölder exponent r applied to p: 1, 2, inf, ...")
    p.add_argument("--reference", dest="reference", action="store_true", default=True)
    p.add_argument("--no-reference", dest="reference", action="store_false")
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--show-derivatives", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("convergence", help="errors over a list of panel counts (CSV)")
    p.add_argument("--expr", required=True)
    _add_interval(p)
    _add_scheme(p)
    p.add_argument("--panels", default="2,4,8,16,32,64", help="comma-separated, ascending")
    p.add_argument("--bound", metavar="R")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("norms", help="L^r norms of a scheme polynomial")
    _add_scheme(p)
    p.add_argument("--r", action="append", default=None, required=True)
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("asymptotics", help="exact vs asymptotic norms (CSV)")
    p.add_argument("--kind", action="append")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--max-n", type=int)
    p.add_argument("--r", action="append")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("sharpness", help="extremal-integrand audit of the panel bound")
    _add_scheme(p)
    _add_interval(p)
    p.add_argument("--r", default="1")
    p.add_argument("--grid", type=int, default=8193)
    p.add_argument("--k", type=int, default=256, help="spike index for r = inf")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sharpness)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except OracleNoConvergence as exc:
        print(f"telequad: oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (UsageError, TelequadError, ValueError, ZeroDivisionError) as exc:
        print(f"telequad: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, getattr(args, "output", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
