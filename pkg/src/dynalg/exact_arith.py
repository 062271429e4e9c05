"""Exact rationals and dense univariate polynomials.

Rationals are ``gmpy2.mpq`` values (always stored reduced, positive
denominator).  :class:`UniPoly` is ring-generic: its coefficients are either
rationals or :class:`~dynalg.tower.AlgebraElement` values of one tower.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral

from gmpy2 import mpq

from .errors import DivisionByZeroError, NotMonicError, PreconditionError, RingMismatchError

BigRational = type(mpq(0))

#: degree of the zero polynomial
NEG_INF = -math.inf


def rat(value) -> BigRational:
    """Coerce ``value`` (int, Fraction, mpq or ``"p/q"`` string) to a rational."""
    if isinstance(value, BigRational):
        return value
    if isinstance(value, (Integral, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, _, den = text.partition("/")
            num, den = int(num), int(den or 1)
        except ValueError as exc:
            raise PreconditionError(f"not a rational literal: {value!r}") from exc
        if den == 0:
            raise DivisionByZeroError(f"zero denominator in {value!r}")
        return mpq(num, den)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rat_add(a, b):
    return rat(a) + rat(b)


def rat_sub(a, b):
    return rat(a) - rat(b)


def rat_mul(a, b):
    return rat(a) * rat(b)


def rat_neg(a):
    return -rat(a)


def rat_inverse(a):
    a = rat(a)
    if a == 0:
        raise DivisionByZeroError("inverse of 0")
    return 1 / a


def rat_div(a, b):
    return rat(a) * rat_inverse(b)


def rat_compare(a, b) -> int:
    a, b = rat(a), rat(b)
    return (a > b) - (a < b)


def format_rat(q) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def ring_of(c):
    """The ring a coefficient lives in: a tower, or the string ``"Q"``."""
    tower = getattr(c, "tower", None)
    return "Q" if tower is None else tower


def zero_like(c):
    if hasattr(c, "tower"):
        return c.tower.zero()
    return mpq(0)


def one_like(c):
    if hasattr(c, "tower"):
        return c.tower.one()
    return mpq(1)


def _coerce(c):
    if isinstance(c, (Integral, Fraction)):
        return mpq(c)
    return c


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of X^i.

    Construction trims coefficients whose normal form is exactly zero, so the
    stored list is canonical.  A leading coefficient may still be a zero
    divisor of the coefficient ring; deciding that is the caller's business.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, coeff, degree: int):
        return cls([zero_like(coeff)] * degree + [coeff])

    # -- structure ---------------------------------------------------------
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else mpq(0)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def ring(self):
        return ring_of(self.coeffs[0]) if self.coeffs else None

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return None

    def coeff(self, i, zero):
        c = self[i]
        return zero if c is None else c

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"

    def __str__(self):
        return format_poly(self)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "UniPoly"):
        if self.coeffs and other.coeffs:
            r1, r2 = ring_of(self.coeffs[0]), ring_of(other.coeffs[0])
            if r1 is not r2 and r1 != r2:
                raise RingMismatchError("polynomial operands over different rings")

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self.scale(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                t = x * y
                k = i + j
                out[k] = t if out[k] is None else out[k] + t
        z = zero_like(a[0])
        return UniPoly([z if c is None else c for c in out])

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        return UniPoly([c * x for x in self.coeffs])

    def __pow__(self, k: int):
        if k < 0:
            raise PreconditionError("negative polynomial power")
        result = UniPoly([one_like(self.coeffs[0]) if self.coeffs else mpq(1)])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return zero_like(x)
        return acc

    __call__ = evaluate

    def compose_shift(self, s):
        """Return f(X + s) by repeated synthetic division (Taylor shift)."""
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] = cs[j] + s * cs[j + 1]
        return UniPoly(cs)

    def inflate(self, q: int):
        """Return f(X^q)."""
        if q == 1 or not self.coeffs:
            return self
        z = zero_like(self.coeffs[0])
        out = [z] * ((len(self.coeffs) - 1) * q + 1)
        for i, c in enumerate(self.coeffs):
            out[i * q] = c
        return UniPoly(out)

    def shift_up(self, k: int):
        """Multiply by X^k."""
        if not self.coeffs or k == 0:
            return self
        return UniPoly([zero_like(self.coeffs[0])] * k + list(self.coeffs))

    def truncate(self, n: int):
        """Drop every term of degree >= n."""
        return UniPoly(self.coeffs[:n])

    def map(self, fn):
        return UniPoly([fn(c) for c in self.coeffs])


def trim(coeffs) -> UniPoly:
    """Canonical polynomial from a possibly non-trimmed coefficient list."""
    return UniPoly(coeffs)


def monic_divmod(f: UniPoly, g: UniPoly):
    """Division by a monic polynomial; exact over any commutative ring."""
    if not g.is_monic():
        raise NotMonicError(f"divisor {g} is not monic")
    f._check(g)
    d = len(g.coeffs) - 1
    n = len(f.coeffs) - 1
    if n < d:
        return UniPoly(), f
    r = list(f.coeffs)
    z = zero_like(r[0])
    q = [z] * (n - d + 1)
    gc = g.coeffs
    for i in range(n - d, -1, -1):
        c = r[i + d]
        q[i] = c
        if c == 0:
            continue
        for j in range(d):
            if gc[j] != 0:
                r[i + j] = r[i + j] - c * gc[j]
    return UniPoly(q), UniPoly(r[:d])


def exact_quotient(f: UniPoly, g: UniPoly) -> UniPoly:
    """f / g for monic g, raising when the division leaves a remainder."""
    from .errors import InvariantError

    q, r = monic_divmod(f, g)
    if not r.is_zero():
        raise InvariantError(f"{g} does not divide {f}")
    return q


def format_poly(f: UniPoly, var: str = "X") -> str:
    """Descending-degree rendering, e.g. ``X^2+X-2``."""
    if f.is_zero():
        return "0"
    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        parts.append(_signed_term(c, mono))
    return _join_terms(parts)


def format_coeff(c) -> str:
    return format_rat(c) if isinstance(c, BigRational) else str(c)


def _signed_term(c, mono: str) -> str:
    """Render ``c*mono`` as a signed chunk ('+...' or '-...')."""
    if isinstance(c, BigRational):
        neg = c < 0
        a = -c if neg else c
        if mono and a == 1:
            body = mono
        else:
            body = format_rat(a) + ("*" + mono if mono else "")
        return ("-" if neg else "+") + body
    text = str(c)
    compound = c.term_count() > 1
    if not mono:
        return text if text.startswith("-") else "+" + text
    if compound:
        return f"+({text})*{mono}"
    if text in ("1", "-1"):
        return ("-" if text == "-1" else "+") + mono
    return (text if text.startswith("-") else "+" + text) + "*" + mono


def _join_terms(parts) -> str:
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s
