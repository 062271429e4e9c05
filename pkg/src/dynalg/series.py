"""Truncated power series in T over a tower.

A series of order N stores the coefficients of T^0 .. T^N; everything from
T^(N+1) on is unknown.  Results of binary operations carry the smaller order.
"""

from __future__ import annotations

from gmpy2 import mpq

from .errors import DivisionByZeroError, PreconditionError, RingMismatchError
from .exact_arith import UniPoly, _join_terms, _signed_term
from .tower import QQ, AlgebraElement, SeparableTower, map_elems, quasi_inverse


class TruncatedSeries:
    __slots__ = ("coeffs", "order", "owner")

    def __init__(self, coeffs, order: int, owner: SeparableTower | None = None):
        if order < 0:
            raise PreconditionError("series order must be >= 0")
        if owner is None:
            owner = next((c.tower for c in coeffs if isinstance(c, AlgebraElement)), QQ)
        cs = [c if isinstance(c, AlgebraElement) else owner.const(c) for c in list(coeffs)[:order + 1]]
        for c in cs:
            if c.tower != owner:
                raise RingMismatchError("series coefficient from another tower")
        cs += [owner.zero()] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.order = order
        self.owner = owner

    @classmethod
    def from_poly(cls, f: UniPoly, order: int, owner: SeparableTower | None = None):
        return cls(f.coeffs, order, owner)

    @classmethod
    def constant(cls, c, order: int, owner: SeparableTower = QQ):
        return cls([c], order, owner)

    @classmethod
    def monomial(cls, c, k: int, order: int, owner: SeparableTower = QQ):
        if k > order:
            return cls([], order, owner)
        return cls([0] * k + [c], order, owner)

    def __getitem__(self, i):
        return self.coeffs[i]

    def valuation(self):
        """Index of the first nonzero coefficient, or None."""
        return next((i for i, c in enumerate(self.coeffs) if not c.is_zero()), None)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def to_poly(self) -> UniPoly:
        return UniPoly(self.coeffs)

    def _other(self, other):
        if isinstance(other, TruncatedSeries):
            if other.owner != self.owner:
                raise RingMismatchError("series over different towers")
            return other
        return TruncatedSeries([other], self.order, self.owner)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.owner == other.owner and self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, mpq, AlgebraElement)):
            return self == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __add__(self, other):
        other = self._other(other)
        n = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[:n + 1], other.coeffs)], n, self.owner)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order, self.owner)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scalar_mul(other)
        other = self._other(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [self.owner.zero()] * (n + 1)
        for i in range(n + 1):
            if a[i].is_zero():
                continue
            for j in range(n + 1 - i):
                if not b[j].is_zero():
                    out[i + j] = out[i + j] + a[i] * b[j]
        return TruncatedSeries(out, n, self.owner)

    def __rmul__(self, other):
        return self.scalar_mul(other)

    def scalar_mul(self, c):
        return TruncatedSeries([c * x for x in self.coeffs], self.order, self.owner)

    def derivative(self):
        """d/dT; the result is known to one order less."""
        if self.order == 0:
            raise PreconditionError("derivative of an order-0 series is unknown")
        return TruncatedSeries([i * c for i, c in enumerate(self.coeffs)][1:], self.order - 1, self.owner)

    def truncate(self, n: int):
        return TruncatedSeries(self.coeffs[:n + 1], min(n, self.order), self.owner)

    def with_order(self, n: int):
        """Drop to order ``n`` (which must not exceed the current order)."""
        if n > self.order:
            raise PreconditionError(f"cannot raise order {self.order} to {n}")
        return self.truncate(n)

    def shift(self, k: int):
        """Multiply by T^k, keeping the order."""
        return TruncatedSeries([self.owner.zero()] * k + list(self.coeffs), self.order, self.owner)

    def inverse(self):
        """1/u for a series whose constant term is a unit."""
        c0 = self.coeffs[0]
        if c0.is_rational():
            if c0.is_zero():
                raise DivisionByZeroError("series with zero constant term is not invertible")
            inv0 = self.owner.const(1 / c0.to_rational())
        else:
            _, inv0 = quasi_inverse(c0)
            if c0 * inv0 != 1:
                raise DivisionByZeroError(f"constant term {c0} is not a unit")
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = self.owner.zero()
            for j in range(1, k + 1):
                if not self.coeffs[j].is_zero():
                    acc = acc + self.coeffs[j] * out[k - j]
            out.append(-acc * inv0)
        return TruncatedSeries(out, self.order, self.owner)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return self.scalar_mul(1 / mpq(other))

    def __repr__(self):
        return f"TruncatedSeries({self}, order={self.order})"

    def __str__(self):
        return format_series(self)


def format_series(u: TruncatedSeries, var: str = "T") -> str:
    """Ascending rendering, e.g. ``(b+1/6)*T+(31/351*b+7/162)*T^3``."""
    parts = []
    for i, c in enumerate(u.coeffs):
        if c.is_zero():
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        parts.append(_signed_term(c.to_rational() if c.is_rational() else c, mono))
    return _join_terms(parts) if parts else "0"


def _as_series_list(G):
    return list(G.coeffs) if isinstance(G, UniPoly) else list(G)


def substitute(G, y: TruncatedSeries) -> TruncatedSeries:
    """Evaluate a polynomial in Y with series coefficients at Y = y."""
    cs = _as_series_list(G)
    for c in cs:
        if c.order != y.order:
            raise PreconditionError(f"order mismatch: coefficient order {c.order}, argument {y.order}")
        if c.owner != y.owner:
            raise RingMismatchError("series over different towers")
    acc = TruncatedSeries([], y.order, y.owner)
    for c in reversed(cs):
        acc = acc * y + c
    return acc


def ramify(u: TruncatedSeries, m: int) -> TruncatedSeries:
    """Substitute X = T^m; a series known to order N is known to order m*N."""
    if not isinstance(m, int) or m < 1:
        raise PreconditionError("ramification index must be a positive integer")
    if m == 1:
        return u
    out = [u.owner.zero()] * (m * u.order + 1)
    for i, c in enumerate(u.coeffs):
        out[i * m] = c
    return TruncatedSeries(out, m * u.order, u.owner)


def poly_from_roots(roots, order: int, owner: SeparableTower) -> list:
    """Coefficients (ascending in Y) of prod (Y - root)."""
    one = TruncatedSeries.constant(1, order, owner)
    prod = [one]
    for r in roots:
        nxt = [TruncatedSeries([], order, owner)] * (len(prod) + 1)
        for k, c in enumerate(prod):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] - c * r
        prod = nxt
    return prod


@map_elems.register
def _(obj: TruncatedSeries, hom):
    if obj.owner != hom.source:
        return obj
    return TruncatedSeries([hom(c) for c in obj.coeffs], obj.order, hom.target)
