"""Command-line front door.

Subcommands: apply, realize, verify, basis, project, hahn, spectrum.
Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
2 usage/parse problems, 3 mathematical failures (singularity, degeneracy,
identity violation). Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DslError, MathError
from .hahn import HahnParams, HahnVariant, spectrum, table_rows
from .maps import b_projection, make_map
from .opcore import apply, realize
from .poly import Poly
from .qnum import QContext, rational
from . import dsl
from .verify import SUITES, run_suite

_MAP_KINDS = ("identity", "phi_q", "phi_delta", "phi_q_prime", "phi_q_delta", "phi_delta_q")


def _add_common(sub, *, delta_default=None):
    sub.add_argument("--q", help="deformation parameter q as an exact rational, e.g. 1/2")
    sub.add_argument(
        "--delta",
        default=delta_default,
        help="shift parameter delta as an exact rational"
        + (" (default %s)" % delta_default if delta_default else ""),
    )
    sub.add_argument(
        "--degree",
        type=int,
        default=16,
        metavar="D",
        help="truncation degree D (default 16)",
    )
    sub.add_argument(
        "--format",
        choices=("text", "json", "csv"),
        default="text",
        help="output format (default text)",
    )


def _context(args, floor=0) -> "QContext | None":
    if args.q is None:
        return None
    return QContext(rational(args.q), max_index=max(64, args.degree * 2, floor))


def _parse_expr(args, text):
    ctx = _context(args)
    return dsl.parse(text, ctx=ctx, delta=args.delta)


def _parse_poly(args, text) -> Poly:
    body = text.strip()
    if not body.startswith("poly("):
        body = "poly(%s)" % body
    p = dsl.parse(body, ctx=_context(args), delta=args.delta)
    return p


def _emit_poly(p: Poly, fmt: str):
    if fmt == "json":
        print(json.dumps(p.to_json(), sort_keys=True))
    elif fmt == "csv":
        print(",".join(str(c) for c in p.coeffs) if not p.is_zero else "0")
    else:
        print(p.to_text())


def cmd_apply(args) -> int:
    e = _parse_expr(args, args.expr)
    if isinstance(e, Poly):
        print("error: first argument must be an operator expression", file=sys.stderr)
        return 2
    p = _parse_poly(args, args.poly)
    result = apply(e, p, args.degree)
    _emit_poly(result, args.format)
    return 0


def cmd_realize(args) -> int:
    e = _parse_expr(args, args.expr)
    if isinstance(e, Poly):
        print("error: argument must be an operator expression", file=sys.stderr)
        return 2
    lin = realize(e, args.degree)
    if args.format == "json":
        print(json.dumps(lin.to_json(), sort_keys=True))
    elif args.format == "csv":
        for n, col in enumerate(lin.columns):
            body = "overflow" if col is None else " ".join(str(c) for c in col.coeffs)
            print("%d,%s" % (n, body))
    else:
        for n, col in enumerate(lin.columns):
            print("x^%d -> %s" % (n, "overflow" if col is None else col.to_text()))
    return 0


def cmd_verify(args) -> int:
    ctx = _context(args)
    if ctx is None:
        print("error: verify requires --q", file=sys.stderr)
        return 2
    delta = rational(args.delta) if args.delta is not None else rational(1)
    checks = run_suite(args.suite, ctx, delta, args.degree)
    rows = [
        {"check": c.name, "ok": c.ok, "q": str(ctx.q), "delta": str(delta), "D": args.degree}
        for c in checks
    ]
    if args.format == "json":
        print(json.dumps(rows, sort_keys=True))
    else:
        for r in rows:
            print(
                "%s %s (q=%s, delta=%s, D=%d)"
                % ("PASS" if r["ok"] else "FAIL", r["check"], r["q"], r["delta"], r["D"])
            )
        print("%d/%d identities hold" % (sum(r["ok"] for r in rows), len(rows)))
    return 0 if all(r["ok"] for r in rows) else 3


def _make_map(args):
    q = rational(args.q) if args.q is not None else None
    delta = rational(args.delta) if args.delta is not None else None
    return make_map(args.map, q=q, delta=delta)


def cmd_basis(args) -> int:
    m = _make_map(args)
    rows = []
    for n in range(args.count + 1):
        p = m.basis_element(n)
        rows.append((n, p))
        if p.degree > args.degree:
            print("error: basis element %d exceeds degree %d" % (n, args.degree), file=sys.stderr)
            return 3
    if args.format == "json":
        print(
            json.dumps(
                {"map": m.to_json(), "elements": [p.to_json() for _, p in rows]},
                sort_keys=True,
            )
        )
    elif args.format == "csv":
        for n, p in rows:
            print("%d,%s" % (n, " ".join(str(c) for c in p.coeffs) or "0"))
    else:
        for n, p in rows:
            print("|%d> = %s" % (n, p.to_text()))
    return 0


def cmd_project(args) -> int:
    m = _make_map(args)
    f = _parse_poly(args, args.poly)
    result = b_projection(f, m, args.degree)
    _emit_poly(result, args.format)
    return 0


def _hahn_params(args) -> HahnParams:
    return HahnParams(
        rational(args.alpha),
        rational(args.beta),
        rational(args.N),
        delta=rational(args.delta),
        c1=rational(args.c1),
    )


def _hahn_ctx(args, variant):
    if variant in (HahnVariant.Q_DEFORMED, HahnVariant.Q_SPECTRUM):
        if args.q is None:
            raise ValueError("%s requires --q" % variant.value)
        return QContext(rational(args.q), max_index=max(64, args.degree * 2))
    return None


def cmd_hahn(args) -> int:
    variant = HahnVariant(args.variant)
    params = _hahn_params(args)
    ctx = _hahn_ctx(args, variant)
    rows = table_rows(variant, params, args.kmax, args.degree, ctx)
    bad = [r for r in rows if r["residual"] != "0"]
    if args.format == "json":
        print(json.dumps(rows, sort_keys=True))
    elif args.format == "csv":
        print("variant,k,eigenvalue,coefficients,residual")
        for r in rows:
            print(
                "%s,%d,%s,%s,%s"
                % (r["variant"], r["k"], r["eigenvalue"], " ".join(r["coefficients"]), r["residual"])
            )
    else:
        for r in rows:
            print(
                "k=%-3d lambda=%-12s residual=%-3s coeffs=[%s]"
                % (r["k"], r["eigenvalue"], r["residual"], ", ".join(r["coefficients"]))
            )
    if bad:
        print("error: nonzero residual at k=%s" % [r["k"] for r in bad], file=sys.stderr)
        return 3
    return 0


def cmd_spectrum(args) -> int:
    variant = HahnVariant(args.variant)
    params = _hahn_params(args)
    ctx = _hahn_ctx(args, variant)
    rows = [
        {"k": k, "eigenvalue": str(spectrum(variant, params, k, ctx))}
        for k in range(args.kmax + 1)
    ]
    if args.format == "json":
        print(json.dumps(rows, sort_keys=True))
    elif args.format == "csv":
        print("k,eigenvalue")
        for r in rows:
            print("%d,%s" % (r["k"], r["eigenvalue"]))
    else:
        for r in rows:
            print("k=%-3d lambda=%s" % (r["k"], r["eigenvalue"]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdeform",
        description="Exact operator calculus for commutation-relation-preserving "
        "deformations: Jackson calculus, adapted bases, deformed Hahn operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="apply an operator expression to a polynomial")
    p.add_argument("expr", help="operator expression, e.g. 'Dq' or 'inv(qb(B))*d'")
    p.add_argument("poly", help="polynomial, e.g. 'poly(x^3)' or 'x^3'")
    _add_common(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("realize", help="tabulate an operator on x^0..x^D")
    p.add_argument("expr")
    _add_common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", help="run a named identity suite")
    p.add_argument("suite", choices=[*SUITES, "all"])
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("basis", help="emit adapted-basis elements |0>..|n>")
    p.add_argument("map", choices=_MAP_KINDS)
    p.add_argument("count", type=int, help="largest basis index to emit")
    _add_common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("project", help="project a polynomial through a map")
    p.add_argument("map", choices=_MAP_KINDS)
    p.add_argument("poly")
    _add_common(p)
    p.set_defaults(func=cmd_project)

    for name, fn, extra in (
        ("hahn", cmd_hahn, True),
        ("spectrum", cmd_spectrum, False),
    ):
        p = sub.add_parser(
            name,
            help="eigenvalue/eigenpolynomial table" if extra else "eigenvalue table",
        )
        p.add_argument(
            "variant", choices=[v.value for v in HahnVariant]
        )
        p.add_argument("--alpha", required=True)
        p.add_argument("--beta", required=True)
        p.add_argument("--N", required=True)
        p.add_argument("--c1", default="-1", help="leading constant (default -1)")
        p.add_argument("--kmax", type=int, default=8)
        _add_common(p, delta_default="1")
        p.set_defaults(func=fn)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DslError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except MathError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
