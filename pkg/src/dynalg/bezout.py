"""Strict Bezout gcd in A[X] for a tower A, splitting A where needed.

The Euclidean chain is run as if A were a field.  Before every division the
leading coefficients of both operands are decided: a coefficient that is 0 on
some component disappears there (formal degree drops), an invertible one is
used to make the divisor monic.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import NotMonicError, PreconditionError
from .exact_arith import UniPoly, exact_quotient, monic_divmod
from .tower import QQ, AlgebraElement, SeparableTower, SplitCover, branch_on


@dataclass(frozen=True)
class BezoutCertificate:
    """a = a1*g, b = b1*g, c*a1 + d*b1 = 1, g monic (or 0 when a = b = 0)."""

    a: UniPoly
    b: UniPoly
    g: UniPoly
    a1: UniPoly
    b1: UniPoly
    c: UniPoly
    d: UniPoly

    def check(self) -> bool:
        one = self.c * self.a1 + self.d * self.b1
        return (self.a == self.a1 * self.g and self.b == self.b1 * self.g
                and len(one.coeffs) == 1 and one.coeffs[0] == 1
                and (self.g.is_monic() or (self.g.is_zero() and self.a.is_zero() and self.b.is_zero())))


@dataclass(frozen=True)
class SeparableAssociate:
    """f = h*g, f' = q*g, r*h + s*q = 1 with h monic and separable."""

    f: UniPoly
    fprime: UniPoly
    h: UniPoly
    g: UniPoly
    q: UniPoly
    r: UniPoly
    s: UniPoly

    def check(self) -> bool:
        one = self.r * self.h + self.s * self.q
        return (self.f == self.h * self.g and self.fprime == self.q * self.g
                and self.h.is_monic() and len(one.coeffs) == 1 and one.coeffs[0] == 1)


@dataclass(frozen=True)
class _Chain:
    a: UniPoly
    b: UniPoly
    r0: UniPoly
    r1: UniPoly
    s0: UniPoly
    t0: UniPoly
    s1: UniPoly
    t1: UniPoly
    inv0: AlgebraElement | None = None
    inv1: AlgebraElement | None = None


def _lift_to_tower(p: UniPoly, tower: SeparableTower) -> UniPoly:
    return UniPoly([c if isinstance(c, AlgebraElement) else tower.const(c) for c in p.coeffs])


def _common_tower(*polys, tower=None) -> SeparableTower:
    for p in polys:
        r = p.ring()
        if r is None:
            continue
        if r == "Q":
            r = QQ
        if tower is None:
            tower = r
        elif r != tower:
            from .errors import RingMismatchError

            raise RingMismatchError("polynomials over different towers")
    return QQ if tower is None else tower


def gcd_split(a: UniPoly, b: UniPoly, tower: SeparableTower | None = None):
    """Return ``(cover, certs)``: a :class:`BezoutCertificate` per branch.

    ``certs[i]`` is ``None`` for the zero-algebra branches of the cover.
    """
    tower = _common_tower(a, b, tower=tower)
    a, b = _lift_to_tower(a, tower), _lift_to_tower(b, tower)
    one, zero = UniPoly([tower.one()]), UniPoly()
    return _euclid(tower, _Chain(a, b, a, b, one, zero, zero, one))


def _euclid(tower: SeparableTower, st: _Chain):
    while True:
        # decide leading coefficients; a zero one vanishes on its component
        for idx in (0, 1):
            r = st.r0 if idx == 0 else st.r1
            inv = st.inv0 if idx == 0 else st.inv1
            if r.coeffs and inv is None:
                field = "inv0" if idx == 0 else "inv1"
                return branch_on(
                    r.lc, st,
                    lambda T, s: _euclid(T, s),
                    lambda T, s, y, f=field: _euclid(T, dataclasses.replace(s, **{f: y})),
                )
        if st.r0.degree() < st.r1.degree():
            st = _Chain(st.a, st.b, st.r1, st.r0, st.s1, st.t1, st.s0, st.t0, st.inv1, st.inv0)
        if st.r1.is_zero():
            return SplitCover.trivial_identity(tower), [_finish(tower, st)]
        monic = st.r1.scale(st.inv1)
        q, r2 = monic_divmod(st.r0, monic)
        q = q.scale(st.inv1)
        st = _Chain(st.a, st.b, st.r1, r2, st.s1, st.t1,
                    st.s0 - q * st.s1, st.t0 - q * st.t1, st.inv1, None)


def _finish(tower: SeparableTower, st: _Chain) -> BezoutCertificate:
    if st.r0.is_zero():
        # gcd(0, 0) = 0; the only certificate has g = 0
        return BezoutCertificate(st.a, st.b, UniPoly(), UniPoly([tower.one()]), UniPoly(),
                                 UniPoly([tower.one()]), UniPoly())
    g = st.r0.scale(st.inv0)
    c, d = st.s0.scale(st.inv0), st.t0.scale(st.inv0)
    a1 = exact_quotient(st.a, g)
    b1 = exact_quotient(st.b, g)
    return BezoutCertificate(st.a, st.b, g, a1, b1, c, d)


def separable_associate(f: UniPoly, tower: SeparableTower | None = None):
    """Return ``(cover, assocs)`` with a :class:`SeparableAssociate` per branch."""
    tower = _common_tower(f, tower=tower)
    f = _lift_to_tower(f, tower)
    if not f.is_monic():
        raise NotMonicError(f"{f} is not monic")
    fp = f.derivative()
    cover, certs = gcd_split(f, fp)
    out = []
    for cert in certs:
        if cert is None:
            out.append(None)
            continue
        out.append(SeparableAssociate(cert.a, cert.b, cert.a1, cert.g, cert.b1, cert.c, cert.d))
    return cover, out


def naive_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Classical monic Euclidean gcd over Q (rational coefficients only)."""
    from gmpy2 import mpq

    x = list(a.coeffs)
    y = list(b.coeffs)
    for v in x + y:
        if isinstance(v, AlgebraElement):
            raise PreconditionError("naive_gcd works over Q only")
    while y:
        while x and len(x) >= len(y):
            k = len(x) - len(y)
            c = mpq(x[-1]) / y[-1]
            for i, yi in enumerate(y):
                x[i + k] -= c * yi
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    if not x:
        return UniPoly()
    lc = mpq(x[-1])
    return UniPoly([mpq(v) / lc for v in x])
