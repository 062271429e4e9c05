"""Re-check the certificates contained in a JSON document written by the CLI."""

from __future__ import annotations

from .bezout import BezoutCertificate, SeparableAssociate
from .errors import DynalgError
from .exact_arith import UniPoly
from .puiseux import CurveInput
from .series import poly_from_roots
from .serialize import elem_from_json, poly_from_json, series_from_json, tower_from_json
from .tower import _check_cert, quasi_inverse


def _towers(doc, found):
    if isinstance(doc, dict):
        if "levels" in doc and "trivial" in doc:
            found.setdefault(repr(doc["levels"]), doc)
        for v in doc.values():
            _towers(v, found)
    elif isinstance(doc, list):
        for v in doc:
            _towers(v, found)
    return found


def _check_towers(doc):
    out = []
    for data in _towers(doc, {}).values():
        tower = tower_from_json(data)
        for k in range(1, tower.depth + 1):
            s, t = tower.sep_cert(k)
            out.append((f"separability certificate of {tower.names[k - 1]} in {tower}",
                        _check_cert(tower.minpoly(k), s, t)))
    return out


def _fundamental(tower, idems):
    total = tower.zero()
    for e in idems:
        total = total + e
    ok = total == 1 and all(e * e == e for e in idems)
    ok = ok and all((idems[i] * idems[j]).is_zero() for i in range(len(idems)) for j in range(i + 1, len(idems)))
    return ok


def _branch_polys(br, keys):
    tower = tower_from_json(br["tower"])
    return tower, {k: poly_from_json(br[k], tower) for k in keys}


def _verify_qinv(doc):
    tower = tower_from_json(doc["tower"])
    x, xs, e = (elem_from_json(doc[k], tower) for k in ("x", "xstar", "e"))
    return [("x*x**x = x", x * xs * x == x), ("x**x*x* = x*", xs * x * xs == xs),
            ("e = x*x*", e == x * xs), ("e^2 = e", e * e == e)]


def _verify_gcd(doc):
    base = tower_from_json(doc["tower"])
    out = [("branch idempotents form a fundamental system",
            _fundamental(base, [elem_from_json(b["idempotent"], base) for b in doc["branches"]]))]
    for i, br in enumerate(doc["branches"]):
        _, p = _branch_polys(br, ("a", "b", "g", "a1", "b1", "c", "d"))
        out.append((f"branch {i + 1}: a = a1*g, b = b1*g, c*a1 + d*b1 = 1", BezoutCertificate(**p).check()))
    return out


def _verify_sqfree(doc):
    base = tower_from_json(doc["tower"])
    out = [("branch idempotents form a fundamental system",
            _fundamental(base, [elem_from_json(b["idempotent"], base) for b in doc["branches"]]))]
    for i, br in enumerate(doc["branches"]):
        _, p = _branch_polys(br, ("f", "fprime", "h", "g", "q", "r", "s"))
        ok = SeparableAssociate(**p).check() and p["fprime"] == p["f"].derivative()
        out.append((f"branch {i + 1}: f = h*g, f' = q*g, r*h + s*q = 1", ok))
    return out


def _verify_factor(doc):
    out = []
    for leaf in doc["leaves"]:
        tower = tower_from_json(leaf["tower"])
        f = poly_from_json(leaf["poly"], tower)
        prod = UniPoly([tower.one()])
        total = 0
        for r in leaf["roots"]:
            root, m = elem_from_json(r["root"], tower), int(r["multiplicity"])
            prod = prod * UniPoly([-root, tower.one()]) ** m
            total += m
        where = f"leaf {tuple(leaf['path'])}"
        out.append((f"{where}: product of linear factors equals f", prod == f and total == f.degree()))
        for fact in leaf.get("facts", []):
            y = elem_from_json(fact["at_leaf"], tower)
            if fact["kind"] == "zero":
                ok = y.is_zero()
            else:
                _, ys = quasi_inverse(y)
                ok = y * ys == 1
            out.append((f"{where}: {fact['element']} is {fact['kind']}", ok))
    return out


def _verify_puiseux(doc):
    N = int(doc["order"])
    terms = {(int(i), int(j)): c for i, j, c in doc["curve"]}
    from .serialize import rat_from_json

    G = CurveInput.from_terms({k: rat_from_json(v) for k, v in terms.items()}, N)
    out = []
    for leaf in doc["leaves"]:
        tower = tower_from_json(leaf["tower"])
        alphas = [series_from_json(a, tower) for a in leaf["branches"]]
        ok = len(alphas) == G.degree and poly_from_roots(alphas, N, tower) == G.at(int(leaf["m"]), tower)
        out.append((f"leaf {tuple(leaf['path'])}: prod (Y - alpha_i) = G(T^{leaf['m']}, Y) mod T^{N + 1}", ok))
    return out


_CHECKERS = {
    "qinv": _verify_qinv,
    "gcd": _verify_gcd,
    "sqfree": _verify_sqfree,
    "factor": _verify_factor,
    "puiseux": _verify_puiseux,
}


def verify_document(doc) -> list:
    """``[(description, passed)]`` for every identity the document claims."""
    from .errors import ParseError

    if not isinstance(doc, dict) or doc.get("command") not in _CHECKERS:
        raise ParseError("not a document produced by this tool (unknown 'command')", 0)
    try:
        return _check_towers(doc) + _CHECKERS[doc["command"]](doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DynalgError):
            raise
        raise ParseError(f"malformed document: {exc!r}", 0) from None
