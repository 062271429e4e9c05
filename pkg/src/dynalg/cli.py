"""Command-line interface.

    dynalg qinv EXPR [--tower SPEC]
    dynalg gcd F G [--tower SPEC]
    dynalg sqfree F [--tower SPEC]
    dynalg factor F [--tower SPEC]
    dynalg puiseux G [--order N]
    dynalg verify FILE

``--json`` switches any command to a JSON document that ``verify`` can
re-check.  Exit codes: 0 ok, 1 parse error, 2 precondition violated,
3 internal invariant failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .bezout import gcd_split, separable_associate
from .cover import factor_linear
from .errors import InvariantError, ParseError, PreconditionError
from .exact_arith import format_poly
from .parsing import Num, Var, format_expr, parse, to_element, to_poly, to_terms
from .puiseux import CurveInput, newton_puiseux
from .serialize import elem_to_json, poly_to_json, rat_to_json, series_to_json, tower_to_json
from .tower import QQ, adjoin_root, quasi_inverse

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INVARIANT = 0, 1, 2, 3


def parse_tower(spec: str | None):
    """``"a:a^2-a,b:b^2-a-1"`` -> tower, each minpoly over the names before it."""
    tower = QQ
    if not spec or not spec.strip():
        return tower
    pos = 0
    for chunk in spec.split(","):
        if ":" not in chunk:
            raise ParseError("tower entries look like name:minpoly", pos)
        name, poly = chunk.split(":", 1)
        name = name.strip()
        if not name.isidentifier():
            raise ParseError(f"bad generator name {name!r}", pos)
        if name in ("X", "Y", "T"):
            raise ParseError(f"{name} is reserved for polynomial variables", pos)
        if name in tower.names:
            raise ParseError(f"generator {name} is declared twice", pos)
        try:
            p = to_poly(parse(poly), tower, var=name)
        except ParseError as exc:
            raise ParseError(f"in minimal polynomial of {name}: {exc.args[0]}",
                             pos + len(chunk.split(":")[0]) + 1 + (exc.position or 0)) from None
        tower = adjoin_root(tower, p, name=name)
        pos += len(chunk) + 1
    return tower


def _read_inputs(values, count: int):
    values = [v for v in (values or []) if v is not None]
    if values and values != ["-"]:
        return values
    lines = [ln.strip() for ln in sys.stdin.read().splitlines() if ln.strip()]
    if len(lines) < count:
        raise ParseError(f"expected {count} expression(s) on stdin, got {len(lines)}", 0)
    return lines[:count]


def _header(tower, labels):
    lab = f" [{'; '.join(labels)}]" if labels else ""
    return f"over {tower}{lab}:"


def _star_name(text: str) -> str:
    e = parse(text)
    s = format_expr(e)
    return s if isinstance(e, Var) or (isinstance(e, Num) and e.value >= 0 and e.value.denominator == 1) \
        else f"({s})"


# -- commands ------------------------------------------------------------------

def cmd_qinv(args):
    tower = parse_tower(args.tower)
    (text,) = _read_inputs([args.expr], 1)
    x = to_element(parse(text), tower)
    cover, xs = quasi_inverse(x)
    e = x * xs
    if x * xs * x != x or xs * x * xs != xs:
        raise InvariantError("quasi-inverse identities fail")
    doc = {
        "command": "qinv", "input": text, "tower": tower_to_json(tower),
        "x": elem_to_json(x), "xstar": elem_to_json(xs), "e": elem_to_json(e),
        "cover": [{"label": b.label, "tower": tower_to_json(b.tower),
                   "idempotent": elem_to_json(b.idempotent)} for b in cover.branches],
    }
    lines = [f"{_star_name(text)}* = {xs}, e = {e}"]
    if cover.identity:
        lines.append("cover: identity")
    else:
        lines.append(f"cover ({cover.provenance}):" if cover.provenance else "cover:")
        lines += ["  " + ln for ln in cover.describe()]
    return doc, lines


def cmd_gcd(args):
    tower = parse_tower(args.tower)
    ft, gt = _read_inputs(args.polys, 2)
    f, g = to_poly(parse(ft), tower, args.var), to_poly(parse(gt), tower, args.var)
    cover, certs = gcd_split(f, g, tower)
    doc = {"command": "gcd", "input": [ft, gt], "var": args.var, "tower": tower_to_json(tower), "branches": []}
    lines = []
    single = len(cover.nontrivial()) == 1 and cover.identity
    for i, b in cover.nontrivial():
        c = certs[i]
        if not c.check():
            raise InvariantError(f"Bezout identities fail on branch {i + 1}")
        doc["branches"].append({
            "label": b.label, "tower": tower_to_json(b.tower), "idempotent": elem_to_json(b.idempotent),
            **{k: poly_to_json(getattr(c, k)) for k in ("a", "b", "g", "a1", "b1", "c", "d")},
        })
        pad = "" if single else "  "
        if not single:
            lines.append(_header(b.tower, [b.label] if b.label else []))
        v = args.var
        lines.append(f"{pad}g = {format_poly(c.g, v)}")
        lines.append(f"{pad}a1 = {format_poly(c.a1, v)}, b1 = {format_poly(c.b1, v)}")
        lines.append(f"{pad}c = {format_poly(c.c, v)}, d = {format_poly(c.d, v)}")
    return doc, lines


def cmd_sqfree(args):
    tower = parse_tower(args.tower)
    (ft,) = _read_inputs([args.poly], 1)
    f = to_poly(parse(ft), tower, args.var)
    cover, assocs = separable_associate(f, tower)
    doc = {"command": "sqfree", "input": ft, "var": args.var, "tower": tower_to_json(tower), "branches": []}
    lines = []
    single = len(cover.nontrivial()) == 1 and cover.identity
    v = args.var
    for i, b in cover.nontrivial():
        a = assocs[i]
        if not a.check():
            raise InvariantError(f"separable associate identities fail on branch {i + 1}")
        doc["branches"].append({
            "label": b.label, "tower": tower_to_json(b.tower), "idempotent": elem_to_json(b.idempotent),
            **{k: poly_to_json(getattr(a, k)) for k in ("f", "fprime", "h", "g", "q", "r", "s")},
        })
        pad = "" if single else "  "
        if not single:
            lines.append(_header(b.tower, [b.label] if b.label else []))
        lines.append(f"{pad}h = {format_poly(a.h, v)}, g = {format_poly(a.g, v)}")
        lines.append(f"{pad}f' = q*g with q = {format_poly(a.q, v)}")
        lines.append(f"{pad}r*h + s*q = 1 with r = {format_poly(a.r, v)}, s = {format_poly(a.s, v)}")
    return doc, lines


def _root_text(r, m):
    return str(r) if m == 1 else f"{r} (multiplicity {m})"


def cmd_factor(args):
    tower = parse_tower(args.tower)
    (ft,) = _read_inputs([args.poly], 1)
    f = to_poly(parse(ft), tower, args.var)
    tree, report = factor_linear(f, tower)
    if not report.check():
        raise InvariantError("linear factorization does not reproduce the input")
    doc = {"command": "factor", "input": ft, "var": args.var, "tower": tower_to_json(tower),
           "tree": tree.to_json(), "leaves": []}
    lines = []
    for path, leaf in report.leaves.items():
        facts = tree.leaf_facts(path)
        doc["leaves"].append({
            "path": list(path), "labels": leaf.labels, "tower": tower_to_json(leaf.tower),
            "poly": poly_to_json(leaf.poly),
            "roots": [{"root": elem_to_json(r), "multiplicity": m} for r, m in leaf.roots],
            "facts": [{"element": str(x), "at_leaf": elem_to_json(y), "kind": k} for x, y, k in facts],
        })
        lab = f" [{'; '.join(leaf.labels)}]" if leaf.labels else ""
        roots = ", ".join(_root_text(r, m) for r, m in leaf.roots)
        lines.append(f"roots over {leaf.tower}{lab}: {roots}")
    if args.tree:
        lines += ["", "cover tree:", tree.render()]
    return doc, lines


def cmd_puiseux(args):
    (gt,) = _read_inputs([args.curve], 1)
    expr = parse(gt)
    terms = to_terms(expr, ["Y", "X"])
    G = CurveInput.from_terms(terms, args.order)
    res = newton_puiseux(G)
    doc = {
        "command": "puiseux", "input": gt, "order": args.order,
        "curve": [[i, j, rat_to_json(c)] for (i, j), c in sorted(G.terms().items())],
        "m": [{"idempotent": elem_to_json(e), "value": b} for e, b in res.m.terms],
        "tree": res.tree.to_json(),
        "leaves": [{"path": list(p), "tower": tower_to_json(res.tree.node_at(p).tower), "m": res.leaf_m[p],
                    "branches": [series_to_json(a) for a in alphas]}
                   for p, alphas in res.branches.items()],
        "diagnostics": res.diagnostics,
    }
    lines = res.render().splitlines()
    if args.tree:
        lines += ["", "cover tree:", res.tree.render()]
    return doc, lines


def cmd_verify(args):
    from .verify import verify_document

    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise PreconditionError(f"cannot read {args.file}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    results = verify_document(doc)
    failed = [d for d, ok in results if not ok]
    lines = [f"{'ok' if ok else 'FAIL'}: {d}" for d, ok in results]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    summary = {"command": "verify", "checks": [{"check": d, "ok": ok} for d, ok in results]}
    if failed:
        raise InvariantError("verification failed: " + "; ".join(failed), (summary, lines))
    return summary, lines


# -- entry point -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a --json given before it
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit a JSON document")
    tower = argparse.ArgumentParser(add_help=False)
    tower.add_argument("--tower", default=None, help='generators as "a:a^2-a,b:b^2-a-1"')
    tower.add_argument("--var", default="X", help="polynomial variable (default X)")

    parser = argparse.ArgumentParser(prog="dynalg", description="Dynamic evaluation over algebraic towers.",
                                     )
    parser.add_argument("--json", action="store_true", help="emit a JSON document")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qinv", parents=[common, tower], help="quasi-inverse and idempotent of an element")
    p.add_argument("expr", nargs="?", default="-")
    p.set_defaults(func=cmd_qinv)

    p = sub.add_parser("gcd", parents=[common, tower], help="gcd with strict Bezout certificate")
    p.add_argument("polys", nargs="*")
    p.set_defaults(func=cmd_gcd)

    p = sub.add_parser("sqfree", parents=[common, tower], help="separable associate")
    p.add_argument("poly", nargs="?", default="-")
    p.set_defaults(func=cmd_sqfree)

    p = sub.add_parser("factor", parents=[common, tower], help="split into linear factors")
    p.add_argument("poly", nargs="?", default="-")
    p.add_argument("--tree", action="store_true", help="also print the cover tree")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("puiseux", parents=[common], help="Puiseux expansions of a curve G(X, Y)")
    p.add_argument("curve", nargs="?", default="-")
    p.add_argument("--order", type=int, default=6, help="truncation order N (default 6)")
    p.add_argument("--tree", action="store_true", help="also print the cover tree")
    p.set_defaults(func=cmd_puiseux)

    p = sub.add_parser("verify", parents=[common], help="re-check a JSON document")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(doc, lines, as_json, out):
    if as_json:
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if getattr(args, "order", 0) < 0:
        err.write("error: --order must be >= 0\n")
        return EXIT_PRECONDITION
    try:
        doc, lines = args.func(args)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except PreconditionError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    except InvariantError as exc:
        if len(exc.args) > 1:
            _emit(*exc.args[1], args.json, out)
        err.write(f"invariant failure: {exc.args[0]}\n")
        return EXIT_INVARIANT
    _emit(doc, lines, args.json, out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
