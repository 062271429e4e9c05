"""Polynomial expressions: parsing, printing and evaluation.

Grammar: rationals ``p`` or ``p/q``, identifiers, ``+ - *``, ``^`` with a
nonnegative integer exponent, parentheses, and division by a rational
constant.  Parsing goes through Python's own expression parser after
mapping ``^`` to ``**``; error columns refer to the original text.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import ParseError, PreconditionError
from .exact_arith import UniPoly, _join_terms, _signed_term
from .tower import AlgebraElement, SeparableTower


@dataclass(frozen=True)
class Num:
    value: mpq


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


def _prepare(text: str):
    """Replace ``^`` by ``**``; return the new text and a column map back."""
    out, cols = [], []
    for i, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            cols += [i, i]
        else:
            out.append(ch)
            cols.append(i)
    cols.append(len(text))
    return "".join(out), cols


def parse(text: str):
    """Parse ``text`` into an expression tree; raises :class:`ParseError`."""
    if not isinstance(text, str):
        raise ParseError("expression must be a string", 0)
    if not text.strip():
        raise ParseError("empty expression", 0)
    if "\n" in text.strip():
        raise ParseError("expression must be on one line", text.index("\n"))
    src, cols = _prepare(text.strip())
    offset = len(text) - len(text.lstrip())

    def col(c):
        c = max(0, min(c, len(cols) - 1))
        return cols[c] + offset

    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        if not exc.offset:
            raise ParseError("unexpected end of expression", len(text.rstrip())) from None
        raise ParseError(f"syntax error: {exc.msg}", col(exc.offset - 1)) from None

    def conv(node):
        where = col(getattr(node, "col_offset", 0))
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError(f"unsupported literal {node.value!r}", where)
            return Num(mpq(node.value))
        if isinstance(node, ast.Name):
            return Var(node.id, where)
        if isinstance(node, ast.UnaryOp):
            arg = conv(node.operand)
            if isinstance(node.op, ast.UAdd):
                return arg
            if isinstance(node.op, ast.USub):
                return Num(-arg.value) if isinstance(arg, Num) else Neg(arg)
            raise ParseError("unsupported unary operator", where)
        if isinstance(node, ast.BinOp):
            left, right = conv(node.left), conv(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return Add(left, right)
            if isinstance(op, ast.Sub):
                return Sub(left, right)
            if isinstance(op, ast.Mult):
                return Mul(left, right)
            if isinstance(op, ast.Div):
                if not isinstance(right, Num):
                    raise ParseError("division is only allowed by a rational constant", col(node.right.col_offset))
                if right.value == 0:
                    raise ParseError("division by zero", col(node.right.col_offset))
                if isinstance(left, Num):
                    return Num(left.value / right.value)
                return Mul(left, Num(1 / right.value))
            if isinstance(op, ast.Pow):
                if not isinstance(right, Num) or right.value.denominator != 1 or right.value < 0:
                    raise ParseError("exponent must be a nonnegative integer", col(node.right.col_offset))
                return Pow(left, int(right.value))
            raise ParseError(f"unsupported operator {type(op).__name__}", where)
        raise ParseError(f"unsupported syntax ({type(node).__name__})", where)

    return conv(tree.body)


# -- printing ---------------------------------------------------------------

def _prec(e) -> int:
    if isinstance(e, (Add, Sub)):
        return 1
    if isinstance(e, Mul):
        return 2
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    if isinstance(e, Num) and (e.value < 0 or e.value.denominator != 1):
        return 2  # prints like a product or a negation
    return 5


def _wrap(e, ok: bool) -> str:
    s = format_expr(e)
    return s if ok else f"({s})"


def format_expr(e) -> str:
    """Print with minimal parentheses; ``parse(format_expr(e)) == e``."""
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, (Add, Sub)):
        sign = "+" if isinstance(e, Add) else "-"
        r = e.right
        right_ok = _prec(r) > 1 and not isinstance(r, Neg) and not (isinstance(r, Num) and r.value < 0)
        return f"{format_expr(e.left)}{sign}{_wrap(r, right_ok)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, _prec(e.left) >= 2)}*{_wrap(e.right, _prec(e.right) > 2)}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _prec(e.arg) > 3)
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _prec(e.base) == 5)}^{e.exp}"
    raise TypeError(f"not an expression: {e!r}")


def variables(e) -> list:
    """Variable names in order of first appearance."""
    out = []

    def walk(x):
        if isinstance(x, Var):
            if x.name not in out:
                out.append(x.name)
        elif isinstance(x, (Add, Sub, Mul)):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, Neg):
            walk(x.arg)
        elif isinstance(x, Pow):
            walk(x.base)

    walk(e)
    return out


def evaluate(e, env: dict, const):
    """Evaluate in any ring: ``env`` maps names to values, ``const`` lifts rationals."""
    if isinstance(e, Num):
        return const(e.value)
    if isinstance(e, Var):
        if e.name not in env:
            raise PreconditionError(f"unknown variable {e.name!r} (at column {e.pos + 1})")
        return env[e.name]
    if isinstance(e, Add):
        return evaluate(e.left, env, const) + evaluate(e.right, env, const)
    if isinstance(e, Sub):
        return evaluate(e.left, env, const) - evaluate(e.right, env, const)
    if isinstance(e, Mul):
        return evaluate(e.left, env, const) * evaluate(e.right, env, const)
    if isinstance(e, Neg):
        return -evaluate(e.arg, env, const)
    if isinstance(e, Pow):
        base = evaluate(e.base, env, const)
        acc = const(mpq(1))
        for _ in range(e.exp):
            acc = acc * base
        return acc
    raise TypeError(f"not an expression: {e!r}")


def _expr(raw):
    return parse(raw) if isinstance(raw, str) else raw


def to_element(raw, tower: SeparableTower) -> AlgebraElement:
    env = {name: tower.gen(name) for name in tower.names}
    return evaluate(_expr(raw), env, tower.const)


def to_poly(raw, tower: SeparableTower, var: str = "X") -> UniPoly:
    """Univariate polynomial in ``var`` with coefficients in ``tower``."""
    if var in tower.names:
        raise PreconditionError(f"{var!r} is both the variable and a generator")
    env = {name: UniPoly([tower.gen(name)]) for name in tower.names}
    env[var] = UniPoly([tower.zero(), tower.one()])
    return evaluate(_expr(raw), env, lambda q: UniPoly([tower.const(q)]))


class _Sparse(dict):
    """Sparse multivariate polynomial: exponent tuple -> rational."""

    nvars = 0

    @classmethod
    def make(cls, n, items):
        p = cls({k: v for k, v in items if v != 0})
        p.nvars = n
        return p

    def __add__(self, other):
        out = dict(self)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return _Sparse.make(self.nvars, out.items())

    def __neg__(self):
        return _Sparse.make(self.nvars, ((k, -v) for k, v in self.items()))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.items():
            for k2, v2 in other.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return _Sparse.make(self.nvars, out.items())


def to_terms(raw, names) -> dict:
    """Expand over Q in the given variables: ``{exponent tuple: rational}``."""
    names = list(names)
    n = len(names)
    env = {}
    for i, name in enumerate(names):
        env[name] = _Sparse.make(n, [(tuple(int(j == i) for j in range(n)), mpq(1))])
    return dict(evaluate(_expr(raw), env, lambda q: _Sparse.make(n, [((0,) * n, q)])))


def format_terms(terms: dict) -> str:
    """Render ``{((name, exp), ...): coeff}`` by descending exponent tuple."""
    if not terms:
        return "0"
    parts = []
    for key in sorted(terms, key=lambda k: tuple(e for _, e in k), reverse=True):
        mono = "*".join(name if e == 1 else f"{name}^{e}" for name, e in sorted(key) if e)
        parts.append(_signed_term(mpq(terms[key]), mono))
    return _join_terms(parts)
