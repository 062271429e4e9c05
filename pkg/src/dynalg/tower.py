"""Finitely presented regular Q-algebras presented as separable towers.

A tower ``Q[a1,...,ak | p1, ..., pk]`` is built level by level; level ``i``
adjoins a root of a monic separable ``p_i`` over the tower below it.  Elements
are stored in fully reduced nested normal form: at level ``k`` a tuple of
``deg(p_k)`` level-``k-1`` normal forms, bottoming out in rationals.  Two
elements are equal iff their normal forms are identical.

Decisions that a field would make silently ("is this zero?") are made by
:func:`is_invertible_split`, which may split the algebra into a product.
Such splits are described by :class:`SplitCover`, a fundamental system of
orthogonal idempotents together with restriction maps onto the components
and sections back, so that per-component data can be amalgamated.
"""

from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass
from functools import singledispatch
from typing import Callable, Sequence

from gmpy2 import mpq

from .errors import (
    DivisionByZeroError,
    InvariantError,
    NotMonicError,
    PreconditionError,
    RingMismatchError,
)
from .exact_arith import BigRational, UniPoly, exact_quotient, format_poly, format_rat, monic_divmod, rat

_ZERO = mpq(0)
_ONE = mpq(1)


@dataclass(frozen=True)
class Level:
    name: str
    minpoly: tuple  # reps one level down, ascending, monic (last entry is 1)
    cert_s: tuple = dataclasses.field(compare=False, default=())
    cert_t: tuple = dataclasses.field(compare=False, default=())

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1


class SeparableTower:
    """A tower of monic separable extensions of Q (or the zero algebra)."""

    __slots__ = ("levels", "trivial", "_hash", "_zeros", "_base", "__weakref__")

    def __init__(self, levels: Sequence[Level] = (), trivial: bool = False):
        self.levels = () if trivial else tuple(levels)
        self.trivial = trivial
        self._hash = hash((self.levels, trivial))
        zeros = [_ZERO]
        for lv in self.levels:
            zeros.append((zeros[-1],) * lv.degree)
        self._zeros = zeros
        self._base = None

    # -- structure -----------------------------------------------------------
    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def names(self) -> tuple:
        return tuple(lv.name for lv in self.levels)

    @property
    def degrees(self) -> tuple:
        return tuple(lv.degree for lv in self.levels)

    def dimension(self) -> int:
        if self.trivial:
            return 0
        d = 1
        for lv in self.levels:
            d *= lv.degree
        return d

    def base(self) -> "SeparableTower":
        """The tower with the top level removed."""
        if not self.levels:
            raise PreconditionError("Q has no base tower")
        if self._base is None:
            self._base = SeparableTower(self.levels[:-1])
        return self._base

    def minpoly(self, k: int | None = None) -> UniPoly:
        """Minimal polynomial of level ``k`` (default: top) over the tower below."""
        k = self.depth if k is None else k
        sub = SeparableTower(self.levels[: k - 1]) if k < self.depth else self.base()
        return UniPoly([AlgebraElement(sub, r) for r in self.levels[k - 1].minpoly])

    def sep_cert(self, k: int | None = None):
        k = self.depth if k is None else k
        sub = SeparableTower(self.levels[: k - 1]) if k < self.depth else self.base()
        lv = self.levels[k - 1]
        return (UniPoly([AlgebraElement(sub, r) for r in lv.cert_s]),
                UniPoly([AlgebraElement(sub, r) for r in lv.cert_t]))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SeparableTower):
            return NotImplemented
        return self._hash == other._hash and self.trivial == other.trivial and self.levels == other.levels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SeparableTower({self.render()!r})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        if self.trivial:
            return "0"
        if not self.levels:
            return "Q"
        rels = []
        for k in range(1, self.depth + 1):
            from .exact_arith import format_poly

            rels.append(format_poly(self.minpoly(k), self.levels[k - 1].name))
        return f"Q[{','.join(self.names)} | {', '.join(rels)}]"

    # -- element construction ------------------------------------------------
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, self._zeros[-1])

    def one(self) -> "AlgebraElement":
        return self.const(1)

    def const(self, q) -> "AlgebraElement":
        return AlgebraElement(self, self._const_rep(rat(q), self.depth))

    def _const_rep(self, q, k):
        if self.trivial:
            return _ZERO  # 1 = 0 in the zero algebra
        r = q
        for i in range(k):
            r = (r,) + (self._zeros[i],) * (self.levels[i].degree - 1)
        return r

    def gen(self, which) -> "AlgebraElement":
        """Generator by name or 1-based level index."""
        k = self._level_index(which)
        lv = self.levels[k - 1]
        if lv.degree == 1:
            # a degree-1 level is X - r: the generator reduces to r
            inner = (self._neg(lv.minpoly[0], k - 1),)
        else:
            inner = (self._zeros[k - 1], self._const_rep(_ONE, k - 1)) + (self._zeros[k - 1],) * (lv.degree - 2)
        return AlgebraElement(self, self._embed_rep(inner, k, self.depth))

    def gens(self):
        return [self.gen(k) for k in range(1, self.depth + 1)]

    def _level_index(self, which) -> int:
        if isinstance(which, int):
            if not 1 <= which <= self.depth:
                raise PreconditionError(f"no level {which} in {self}")
            return which
        try:
            return self.names.index(which) + 1
        except ValueError:
            raise PreconditionError(f"unknown generator {which!r} in {self}") from None

    def _embed_rep(self, rep, k_from, k_to):
        for i in range(k_from, k_to):
            rep = (rep,) + (self._zeros[i],) * (self.levels[i].degree - 1)
        return rep

    def element(self, coeffs) -> "AlgebraElement":
        """Element from its top-level coefficient list (base elements or rationals)."""
        if self.depth == 0:
            (c,) = coeffs if len(coeffs) else (0,)
            return self.const(c)
        base = self.base()
        d = self.levels[-1].degree
        reps = []
        for c in coeffs:
            if isinstance(c, AlgebraElement):
                if c.tower != base:
                    raise RingMismatchError("coefficient not in the base tower")
                reps.append(c.rep)
            else:
                reps.append(base._const_rep(rat(c), base.depth))
        reps += [self._zeros[-2]] * (d - len(reps))
        if len(reps) > d:
            poly = UniPoly([AlgebraElement(base, r) for r in reps])
            _, rem = monic_divmod(poly, self.minpoly())
            reps = [c.rep for c in rem.coeffs] + [self._zeros[-2]] * (d - len(rem.coeffs))
        return AlgebraElement(self, tuple(reps))

    def from_flat(self, coeffs) -> "AlgebraElement":
        """Element from its coordinates in the monomial basis (inverse of ``flat``)."""
        if self.trivial:
            return self.zero()
        if len(coeffs) != self.dimension():
            raise PreconditionError(f"expected {self.dimension()} coordinates, got {len(coeffs)}")
        return AlgebraElement(self, self._unflat([rat(c) for c in coeffs], self.depth))

    def embed(self, x: "AlgebraElement") -> "AlgebraElement":
        """Image of an element of a sub-tower (a prefix of this tower)."""
        k = x.tower.depth
        if x.tower.trivial or self.levels[:k] != x.tower.levels:
            raise RingMismatchError(f"{x.tower} is not a sub-tower of {self}")
        return AlgebraElement(self, self._embed_rep(x.rep, k, self.depth))

    def extend(self, name: str, minpoly: UniPoly, cert) -> "SeparableTower":
        """Add a level without checking anything (see :func:`adjoin_root`)."""
        s, t = cert
        lv = Level(name, _reps(minpoly, self), _reps(s, self), _reps(t, self))
        return SeparableTower(self.levels + (lv,))

    # -- arithmetic on raw reps ---------------------------------------------
    def _add(self, x, y, k):
        if k == 0:
            return x + y
        return tuple([self._add(a, b, k - 1) for a, b in zip(x, y)])

    def _sub(self, x, y, k):
        if k == 0:
            return x - y
        return tuple([self._sub(a, b, k - 1) for a, b in zip(x, y)])

    def _neg(self, x, k):
        if k == 0:
            return -x
        return tuple([self._neg(a, k - 1) for a in x])

    def _scale(self, x, q, k):
        if k == 0:
            return x * q
        return tuple([self._scale(a, q, k - 1) for a in x])

    def _is_const(self, x, k):
        z = self._zeros[k - 1]
        for a in x[1:]:
            if a != z:
                return False
        return True

    def _mul(self, x, y, k):
        if k == 0:
            return x * y
        z = self._zeros[k - 1]
        if self._is_const(x, k):
            c = x[0]
            return tuple([z if b == z else self._mul(c, b, k - 1) for b in y])
        if self._is_const(y, k):
            c = y[0]
            return tuple([z if a == z else self._mul(a, c, k - 1) for a in x])
        d = len(x)
        prod = [z] * (2 * d - 1)
        for i, a in enumerate(x):
            if a == z:
                continue
            for j, b in enumerate(y):
                if b == z:
                    continue
                prod[i + j] = self._add(prod[i + j], self._mul(a, b, k - 1), k - 1)
        m = self.levels[k - 1].minpoly
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c == z:
                continue
            for j in range(d):
                if m[j] != z:
                    prod[i - d + j] = self._sub(prod[i - d + j], self._mul(c, m[j], k - 1), k - 1)
        return tuple(prod[:d])

    def _flat(self, x, k):
        if k == 0:
            return [x]
        out = []
        for a in x:
            out.extend(self._flat(a, k - 1))
        return out

    def _unflat(self, vec, k):
        if k == 0:
            return vec[0]
        d = self.levels[k - 1].degree
        size = len(vec) // d
        return tuple(self._unflat(vec[i * size:(i + 1) * size], k - 1) for i in range(d))


def _reps(poly: UniPoly, tower: SeparableTower) -> tuple:
    out = []
    for c in poly.coeffs:
        if isinstance(c, AlgebraElement):
            if c.tower != tower:
                raise RingMismatchError("polynomial coefficients are not in the expected tower")
            out.append(c.rep)
        else:
            out.append(tower._const_rep(rat(c), tower.depth))
    return tuple(out)


QQ = SeparableTower()
TRIVIAL = SeparableTower(trivial=True)


class AlgebraElement:
    """An element of a :class:`SeparableTower` in reduced normal form."""

    __slots__ = ("tower", "rep")

    def __init__(self, tower: SeparableTower, rep):
        self.tower = tower
        self.rep = _ZERO if tower.trivial else rep

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            if other.tower is not self.tower and other.tower != self.tower:
                raise RingMismatchError(f"elements of {self.tower} and {other.tower}")
            return other.rep
        try:
            return self.tower._const_rep(rat(other), self.tower.depth)
        except TypeError:
            return None

    def __add__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return AlgebraElement(self.tower, self.tower._add(self.rep, r, self.tower.depth))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return AlgebraElement(self.tower, self.tower._sub(self.rep, r, self.tower.depth))

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        return AlgebraElement(self.tower, self.tower._sub(r, self.rep, self.tower.depth))

    def __neg__(self):
        return AlgebraElement(self.tower, self.tower._neg(self.rep, self.tower.depth))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            r = self._coerce(other)
            return AlgebraElement(self.tower, self.tower._mul(self.rep, r, self.tower.depth))
        try:
            q = rat(other)
        except TypeError:
            return NotImplemented
        return AlgebraElement(self.tower, self.tower._scale(self.rep, q, self.tower.depth))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, AlgebraElement):
            if not other.is_rational():
                raise PreconditionError("division by a non-rational element; use quasi_inverse")
            other = other.to_rational()
        q = rat(other)
        if q == 0:
            raise DivisionByZeroError("division by 0")
        return self * (1 / q)

    def __pow__(self, k: int):
        if k < 0:
            raise PreconditionError("negative power")
        result = self.tower.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            if other.tower is not self.tower and other.tower != self.tower:
                return False
            return self.rep == other.rep
        try:
            return self.rep == self.tower._const_rep(rat(other), self.tower.depth)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.rep)

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.rep == self.tower._zeros[-1]

    def is_rational(self) -> bool:
        r = self.rep
        for k in range(self.tower.depth, 0, -1):
            if not self.tower._is_const(r, k):
                return False
            r = r[0]
        return True

    def to_rational(self) -> BigRational:
        if not self.is_rational():
            raise PreconditionError(f"{self} is not rational")
        r = self.rep
        for _ in range(self.tower.depth):
            r = r[0]
        return r

    def as_poly(self) -> UniPoly:
        """Top-level coefficients as a polynomial over the base tower."""
        base = self.tower.base()
        return UniPoly([AlgebraElement(base, r) for r in self.rep])

    def flat(self) -> list:
        """Coordinates in the monomial basis (lowest level varies fastest)."""
        return self.tower._flat(self.rep, self.tower.depth)

    def monomials(self) -> dict:
        """``{(e1, ..., ek): coeff}`` for the nonzero terms."""
        out = {}

        def walk(r, k, exps):
            if k == 0:
                if r != 0:
                    out[tuple(reversed(exps))] = r
                return
            for i, a in enumerate(r):
                walk(a, k - 1, exps + [i])

        walk(self.rep, self.tower.depth, [])
        return out

    def term_count(self) -> int:
        return len(self.monomials())

    def sort_key(self):
        return tuple((e, -c) for e, c in sorted(self.monomials().items(), key=lambda t: _mono_order(t[0])))

    def __repr__(self):
        return f"AlgebraElement({str(self)!r} in {self.tower})"

    def __str__(self):
        return render_element(self)


def _mono_order(exps):
    # level-major: compare the top generator's exponent first, descending
    return tuple(-e for e in reversed(exps))


def render_element(x: AlgebraElement) -> str:
    terms = sorted(x.monomials().items(), key=lambda t: _mono_order(t[0]))
    if not terms:
        return "0"
    names = x.tower.names
    parts = []
    for exps, c in terms:
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
        )
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{format_rat(a)}*{mono}"
        else:
            body = format_rat(a)
        parts.append(("-" if neg else "+") + body)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


# ---------------------------------------------------------------------------
# homomorphisms and restriction of structured data

class Hom:
    """A Q-algebra homomorphism between towers."""

    __slots__ = ("source", "target", "_fn", "description")

    def __init__(self, source, target, fn, description=""):
        self.source = source
        self.target = target
        self._fn = fn
        self.description = description

    def __call__(self, x):
        if not isinstance(x, AlgebraElement):
            return self.target.const(x)
        if x.tower is not self.source and x.tower != self.source:
            raise RingMismatchError(f"{self.description or 'map'} expects {self.source}, got {x.tower}")
        if self.target.trivial:
            return self.target.zero()
        return self._fn(x)

    def then(self, other: "Hom") -> "Hom":
        """``other`` after ``self``."""
        return Hom(self.source, other.target, lambda x: other(self(x)),
                   ";".join(d for d in (self.description, other.description) if d))

    @classmethod
    def identity(cls, tower):
        return cls(tower, tower, lambda x: x, "")

    @classmethod
    def embedding(cls, source, target):
        return cls(source, target, target.embed, "embed")

    def __repr__(self):
        return f"Hom({self.source} -> {self.target})"


@singledispatch
def map_elems(obj, hom: Hom):
    """Push every algebra element inside ``obj`` through ``hom``."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        changes = {f.name: map_elems(getattr(obj, f.name), hom)
                   for f in dataclasses.fields(obj) if f.init}
        return dataclasses.replace(obj, **changes)
    return obj


@map_elems.register
def _(obj: AlgebraElement, hom):
    return hom(obj)


@map_elems.register
def _(obj: UniPoly, hom):
    return obj.map(hom)


@map_elems.register
def _(obj: tuple, hom):
    return tuple(map_elems(o, hom) for o in obj)


@map_elems.register
def _(obj: list, hom):
    return [map_elems(o, hom) for o in obj]


@map_elems.register
def _(obj: dict, hom):
    return {k: map_elems(v, hom) for k, v in obj.items()}


@map_elems.register
def _(obj: SeparableTower, hom):
    return hom.target if obj == hom.source else obj


# ---------------------------------------------------------------------------
# covers

@dataclass(frozen=True)
class Branch:
    tower: SeparableTower
    idempotent: AlgebraElement  # in the parent
    restrict: Hom
    lift: Callable  # section: component element -> parent element
    label: str = ""
    facts: tuple = ()  # (element of the parent, "zero" | "invertible") decided on this branch

    @property
    def trivial(self) -> bool:
        return self.tower.trivial


class SplitCover:
    """A product decomposition ``A = prod A/<1-e_i>`` with maps both ways."""

    def __init__(self, parent: SeparableTower, branches: Sequence[Branch],
                 provenance: str = "", identity: bool = False):
        if not branches and not parent.trivial:
            raise PreconditionError("only the zero algebra is covered by the empty family")
        self.parent = parent
        self.branches = tuple(branches)
        self.provenance = provenance
        self.identity = identity

    @classmethod
    def trivial_identity(cls, parent: SeparableTower) -> "SplitCover":
        if parent.trivial:
            return cls(parent, (), "empty family", identity=True)
        b = Branch(parent, parent.one(), Hom.identity(parent), lambda y: y, "")
        return cls(parent, (b,), "identity", identity=True)

    def __len__(self):
        return len(self.branches)

    def nontrivial(self):
        return [(i, b) for i, b in enumerate(self.branches) if not b.trivial]

    def restrict(self, x, i: int):
        return self.branches[i].restrict(x)

    def amalgamate(self, parts):
        """The unique parent element restricting to ``parts`` (CRT)."""
        nontriv = self.nontrivial()
        if len(parts) == len(self.branches):
            pairs = [(b, parts[i]) for i, b in nontriv]
        elif len(parts) == len(nontriv):
            pairs = [(b, p) for (_, b), p in zip(nontriv, parts)]
        else:
            raise PreconditionError(
                f"amalgamate needs {len(nontriv)} parts (or {len(self.branches)}), got {len(parts)}")
        total = self.parent.zero()
        for b, part in pairs:
            if isinstance(part, AlgebraElement) and part.tower != b.tower:
                raise RingMismatchError("part does not live on its branch")
            y = b.lift(part if isinstance(part, AlgebraElement) else b.tower.const(part))
            total = total + b.idempotent * y
        return total

    def amalgamate_poly(self, parts) -> UniPoly:
        """Coefficientwise amalgamation of per-branch polynomials."""
        nontriv = self.nontrivial()
        if len(parts) == len(self.branches):
            parts = [parts[i] for i, _ in nontriv]
        n = max((len(p.coeffs) for p in parts), default=0)
        coeffs = []
        for k in range(n):
            coeffs.append(self.amalgamate(
                [p.coeffs[k] if k < len(p.coeffs) else b.tower.zero() for (_, b), p in zip(nontriv, parts)]))
        return UniPoly(coeffs)

    def refine(self, subcovers: dict) -> "SplitCover":
        """Flatten: replace branch ``i`` by the branches of ``subcovers[i]``."""
        out = []
        for i, b in enumerate(self.branches):
            sub = subcovers.get(i)
            if sub is None or b.trivial:
                out.append(b)
                continue
            if sub.parent != b.tower:
                raise RingMismatchError("subcover does not refine this branch")
            for sb in sub.branches:
                lift_b, lift_s = b.lift, sb.lift
                label = "; ".join(x for x in (b.label, sb.label) if x)
                out.append(Branch(
                    sb.tower,
                    b.idempotent * lift_b(sb.idempotent),
                    b.restrict.then(sb.restrict),
                    (lambda y, f=lift_b, g=lift_s: f(g(y))),
                    label,
                    b.facts + tuple((lift_b(x), k) for x, k in sb.facts),
                ))
        ident = self.identity and all(
            (subcovers.get(i) is None or subcovers[i].identity) for i in range(len(self.branches)))
        prov = self.provenance
        subprov = [s.provenance for s in subcovers.values() if s is not None and not s.identity]
        if subprov:
            prov = "; ".join([p for p in [prov] if p] + subprov)
        return SplitCover(self.parent, out, prov, identity=ident)

    def check_fundamental(self) -> bool:
        es = [b.idempotent for b in self.branches]
        total = self.parent.zero()
        for e in es:
            total = total + e
        if total != 1:
            return False
        return all((es[i] * es[j]).is_zero() for i in range(len(es)) for j in range(i + 1, len(es)))

    def describe(self) -> list[str]:
        lines = []
        for i, b in enumerate(self.branches):
            tag = f" [{b.label}]" if b.label else ""
            lines.append(f"branch {i + 1}{tag}: {b.tower}")
        return lines

    def __repr__(self):
        return f"SplitCover({self.parent}, {len(self.branches)} branches, {self.provenance!r})"


def branch_on(x: AlgebraElement, state, on_zero, on_unit):
    """Case split on ``x`` being 0 or invertible, continuing per component.

    ``on_zero(tower, state)`` and ``on_unit(tower, state, inverse)`` return a
    ``(cover, results)`` pair over the component; the result is the flattened
    cover over ``x.tower`` with results aligned to its branches.
    """
    tower = x.tower
    if x.is_rational():
        if x.is_zero():
            return on_zero(tower, state)
        return on_unit(tower, state, tower.const(1 / x.to_rational()))
    cover, tags = is_invertible_split(x)
    subcovers, results = {}, {}
    for i, b in cover.nontrivial():
        st = map_elems(state, b.restrict)
        tag = tags[i]
        if isinstance(tag, Zero):
            sub, res = on_zero(b.tower, st)
        else:
            sub, res = on_unit(b.tower, st, tag.inverse)
        subcovers[i] = sub
        results[i] = res
    flat = cover.refine(subcovers)
    out = []
    for i, b in enumerate(cover.branches):
        if i in results:
            out.extend(results[i])
        else:
            out.append(None)
    return flat, out


# ---------------------------------------------------------------------------
# operations

@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Invertible:
    inverse: AlgebraElement


class NameSupply:
    """Deterministic fresh generator names.

    Names from ``letters`` are handed out first, then ``a1, a2, ...``.
    """

    def __init__(self, prefix: str = "a", start: int = 1, letters=()):
        self.prefix = prefix
        self.counter = start
        self.letters = list(letters)

    def fresh(self, tower: SeparableTower | None = None) -> str:
        taken = set(tower.names) if tower is not None else set()
        while self.letters:
            name = self.letters.pop(0)
            if name not in taken:
                return name
        while True:
            name = f"{self.prefix}{self.counter}"
            self.counter += 1
            if name not in taken:
                return name


def normal_form(raw, tower: SeparableTower) -> AlgebraElement:
    """Reduce a raw polynomial expression in the generators of ``tower``.

    ``raw`` may be an element, a rational, an expression string, or a mapping
    from monomials to coefficients; a monomial is a dict or tuple of
    ``(name, exponent)`` pairs.
    """
    if isinstance(raw, AlgebraElement):
        if raw.tower != tower:
            raise RingMismatchError("element belongs to another tower")
        return raw
    if isinstance(raw, str):
        from .parsing import parse, to_element

        return to_element(parse(raw), tower)
    if isinstance(raw, dict):
        total = tower.zero()
        for mono, c in raw.items():
            pairs = mono.items() if isinstance(mono, dict) else mono
            term = tower.const(c)
            for name, e in pairs:
                term = term * tower.gen(name) ** int(e)
            total = total + term
        return total
    return tower.const(raw)


def _poly_in(x: AlgebraElement) -> UniPoly:
    return x.as_poly()


def _normalize_cert(p: UniPoly, t: UniPoly):
    """Shortest certificate (s, t) with s*p + t*p' = 1, from any valid t."""
    if p.degree() >= 1:
        _, t = monic_divmod(t, p)
    one = UniPoly([p.coeffs[0].tower.one()]) if p.coeffs else UniPoly([1])
    s = exact_quotient(one - t * p.derivative(), p)
    return s, t


def _check_cert(p: UniPoly, s: UniPoly, t: UniPoly) -> bool:
    lhs = s * p + t * p.derivative()
    return len(lhs.coeffs) == 1 and lhs.coeffs[0] == 1


def _extension_cover(cover: SplitCover, tower: SeparableTower) -> SplitCover:
    """Base change of a cover of ``tower.base()`` to ``tower``."""
    base = tower.base()
    name = tower.levels[-1].name
    p = tower.minpoly()
    s, t = tower.sep_cert()
    embed = Hom.embedding(base, tower)
    branches = []
    for b in cover.branches:
        if b.trivial:
            branches.append(Branch(TRIVIAL, tower.zero(), Hom(tower, TRIVIAL, lambda x: TRIVIAL.zero()),
                                   lambda y: tower.zero(), b.label))
            continue
        comp = b.tower.extend(name, p.map(b.restrict), (s.map(b.restrict), t.map(b.restrict)))
        restrict = Hom(tower, comp, lambda x, r=b.restrict, c=comp: c.element([r(a) for a in x.as_poly().coeffs]
                                                                             or [0]), b.restrict.description)
        lift = (lambda y, l=b.lift: tower.element([l(a) for a in y.as_poly().coeffs] or [0]))
        facts = tuple((embed(x), k) for x, k in b.facts)
        branches.append(Branch(comp, embed(b.idempotent), restrict, lift, b.label, facts))
    return SplitCover(tower, branches, cover.provenance, identity=cover.identity)


def quasi_inverse(x: AlgebraElement):
    """Return ``(cover, x*)`` with x x* x = x and x* x x* = x*.

    ``x*`` lives in the parent tower; ``cover`` records the splits of the
    algebra that were needed to compute it.
    """
    return _quasi_inverse(x)


@functools.lru_cache(maxsize=8192)
def _quasi_inverse(x: AlgebraElement):
    from .bezout import gcd_split

    tower = x.tower
    if tower.trivial or x.is_zero():
        return SplitCover.trivial_identity(tower), tower.zero()
    if x.is_rational():
        return SplitCover.trivial_identity(tower), tower.const(1 / x.to_rational())
    base = tower.base()
    p = tower.minpoly()
    s, t = tower.sep_cert()
    q = x.as_poly()
    cover, certs = gcd_split(p, q)
    parts = []
    for i, b in cover.nontrivial():
        cert = certs[i]
        g, p1, d = cert.g, cert.a1, cert.d
        s_b, t_b = s.map(b.restrict), t.map(b.restrict)
        u = s_b * p1 + t_b * p1.derivative()
        _, xs = monic_divmod(d * u * u * g, cert.a)
        parts.append(xs)
    xs_poly = cover.amalgamate_poly(parts)
    xstar = tower.element(list(xs_poly.coeffs) or [0])
    return _extension_cover(cover, tower), xstar


def idempotent_of(x: AlgebraElement) -> AlgebraElement:
    """``e = x x*``: idempotent generating the same ideal as x."""
    _, xs = quasi_inverse(x)
    return x * xs


def _trivial_branch(parent: SeparableTower, label: str) -> Branch:
    return Branch(TRIVIAL, parent.zero(), Hom(parent, TRIVIAL, lambda x: TRIVIAL.zero()),
                  lambda y: parent.zero(), label)


def _component(parent: SeparableTower, b: Branch, g: UniPoly, cert, idem, label) -> Branch:
    """Branch for ``b.tower[X]/<g>`` where ``g`` divides the top minpoly."""
    embed = Hom.embedding(parent.base(), parent)
    deg = g.degree()
    if deg == 0 or g.is_zero():
        return _trivial_branch(parent, label)
    if deg == 1:
        root = -g.coeffs[0]
        comp = b.tower
        restrict = Hom(parent, comp, lambda x, r=b.restrict, z=root: x.as_poly().map(r).evaluate(z), label)
        lift = (lambda y, l=b.lift: embed(l(y)))
        return Branch(comp, idem, restrict, lift, label)
    name = parent.levels[-1].name
    comp = b.tower.extend(name, g, cert)
    restrict = Hom(parent, comp, lambda x, r=b.restrict, c=comp: c.element([r(a) for a in x.as_poly().coeffs]
                                                                         or [0]), label)
    lift = (lambda y, l=b.lift: parent.element([l(a) for a in y.as_poly().coeffs] or [0]))
    return Branch(comp, idem, restrict, lift, label)


def _factor_cert(p: UniPoly, s: UniPoly, t: UniPoly, g: UniPoly, p1: UniPoly):
    """Separability certificate of a factor g of p = g*p1 from p's certificate."""
    # s*g*p1 + t*(g'*p1 + g*p1') = 1  =>  g*(s*p1 + t*p1') + g'*(t*p1) = 1
    if g.degree() < 1:
        return UniPoly(), UniPoly()
    return _normalize_cert(g, t * p1)


def split_by_idempotent(tower: SeparableTower, e: AlgebraElement) -> SplitCover:
    """Split along an idempotent: the ``e = 1`` components, then ``e = 0``."""
    cover, _ = _split_by_idempotent(tower, e)
    return cover


def _split_by_idempotent(tower, e, labels=("e=1", "e=0")):
    from .bezout import gcd_split

    if e.tower != tower:
        raise RingMismatchError("idempotent is not in this tower")
    if e * e != e:
        raise PreconditionError(f"{e} is not idempotent")
    one_side, zero_side = labels
    if tower.trivial:
        return SplitCover(tower, (), "split of the zero algebra", identity=True), []
    ident = Branch(tower, tower.one(), Hom.identity(tower), lambda y: y, "")
    if e == 1:
        b = dataclasses.replace(ident, label=one_side)
        return SplitCover(tower, (b, _trivial_branch(tower, zero_side)), "", identity=True), [1, 0]
    if e.is_zero():
        b = dataclasses.replace(ident, label=zero_side)
        return SplitCover(tower, (_trivial_branch(tower, one_side), b), "", identity=True), [1, 0]
    if tower.depth == 0:
        raise InvariantError("Q has no idempotents besides 0 and 1")
    p = tower.minpoly()
    s, t = tower.sep_cert()
    E = e.as_poly()
    one_minus = UniPoly([tower.base().one()]) - E
    bcover, certs = gcd_split(p, one_minus)
    embed = Hom.embedding(tower.base(), tower)
    ones, zeros = [], []
    for i, b in enumerate(bcover.branches):
        if b.trivial:
            ones.append(_trivial_branch(tower, one_side))
            zeros.append(_trivial_branch(tower, zero_side))
            continue
        g = certs[i].g
        p_b = p.map(b.restrict)
        p1 = exact_quotient(p_b, g)
        s_b, t_b = s.map(b.restrict), t.map(b.restrict)
        f = embed(b.idempotent)
        lab1 = "; ".join(x for x in (b.label, one_side) if x)
        lab0 = "; ".join(x for x in (b.label, zero_side) if x)
        facts = tuple((embed(x), k) for x, k in b.facts)
        one = _component(tower, b, g, _factor_cert(p_b, s_b, t_b, g, p1), e * f, lab1)
        zero = _component(tower, b, p1, _factor_cert(p_b, s_b, t_b, p1, g), (1 - e) * f, lab0)
        ones.append(dataclasses.replace(one, facts=facts))
        zeros.append(dataclasses.replace(zero, facts=facts))
    sides = [1] * len(ones) + [0] * len(zeros)
    return SplitCover(tower, ones + zeros, f"split by idempotent {e}"), sides


def split_fundamental(tower: SeparableTower, es: Sequence[AlgebraElement]) -> SplitCover:
    """Cover by a fundamental system of orthogonal idempotents.

    Branches are labelled ``e<i>``; the components of ``e_i`` come before
    those of ``e_j`` for ``i < j``.
    """
    es = [normal_form(e, tower) for e in es]
    total = tower.zero()
    for e in es:
        total = total + e
    if total != 1:
        raise PreconditionError(f"idempotents do not sum to 1 (sum = {total})")
    for i, a in enumerate(es):
        if a * a != a:
            raise PreconditionError(f"e{i + 1}^2 != e{i + 1}")
        for j in range(i + 1, len(es)):
            if not (a * es[j]).is_zero():
                raise PreconditionError(f"e{i + 1}*e{j + 1} != 0")
    if not es:
        return SplitCover(tower, (), "empty family", identity=True)
    return _split_chain(tower, es, 1)


def _split_chain(tower, es, idx):
    if len(es) == 1:
        b = Branch(tower, tower.one(), Hom.identity(tower), lambda y: y, f"e{idx}")
        return SplitCover(tower, (b,), "", identity=True)
    cover, sides = _split_by_idempotent(tower, es[0], (f"e{idx}", ""))
    subs = {}
    for i, b in cover.nontrivial():
        if sides[i] == 0:
            subs[i] = _split_chain(b.tower, [b.restrict(e) for e in es[1:]], idx + 1)
    flat = cover.refine(subs)
    return SplitCover(tower, flat.branches, f"fundamental system of {len(es) + idx - 1} idempotents")


def amalgamate(cover: SplitCover, parts) -> AlgebraElement:
    if not isinstance(cover, SplitCover):
        raise PreconditionError("amalgamate needs a SplitCover produced by this module")
    return cover.amalgamate(parts)


def _label_form(x: AlgebraElement) -> AlgebraElement:
    """``x`` scaled so its leading term has coefficient 1 (same zero set)."""
    terms = sorted(x.monomials().items(), key=lambda t: _mono_order(t[0]))
    return x * (1 / terms[0][1]) if terms else x


def is_invertible_split(x: AlgebraElement):
    """Cover on which x is 0 or invertible; returns ``(cover, tags)``.

    ``tags[i]`` is :class:`Zero` or :class:`Invertible` for nontrivial branches
    and ``None`` for the zero-algebra branches.
    """
    tower = x.tower
    _, xs = quasi_inverse(x)
    e = x * xs
    txt = str(_label_form(x))
    cover, sides = _split_by_idempotent(tower, e, (f"{txt} != 0", f"{txt} = 0"))
    tags, branches = [], []
    for i, b in enumerate(cover.branches):
        if b.trivial:
            tags.append(None)
        elif sides[i] == 1:
            tags.append(Invertible(b.restrict(xs)))
            b = dataclasses.replace(b, facts=b.facts + ((x, "invertible"),))
        else:
            tags.append(Zero())
            b = dataclasses.replace(b, facts=b.facts + ((x, "zero"),))
        branches.append(b)
    return SplitCover(tower, branches, cover.provenance, cover.identity), tags


def adjoin_root(tower: SeparableTower, p: UniPoly, cert=None, name: str | None = None,
                names: NameSupply | None = None) -> SeparableTower:
    """Extend ``tower`` by a root of the monic separable polynomial ``p``."""
    from .bezout import gcd_split

    if tower.trivial:
        raise PreconditionError("cannot extend the zero algebra")
    p = UniPoly([c if isinstance(c, AlgebraElement) else tower.const(c) for c in p.coeffs])
    if p.degree() < 1:
        raise PreconditionError("adjoin_root needs a nonconstant polynomial")
    if not p.is_monic():
        raise NotMonicError(f"{p} is not monic")
    if p.ring() != tower:
        raise RingMismatchError("polynomial is not over this tower")
    if cert is None:
        cover, certs = gcd_split(p, p.derivative())
        cs, ds = [], []
        for i, _ in cover.nontrivial():
            c = certs[i]
            if c.g.degree() != 0:
                raise PreconditionError(f"{format_poly(p, name or 'X')} is not separable")
            cs.append(c.c)
            ds.append(c.d)
        t = cover.amalgamate_poly(ds)
        s, t = _normalize_cert(p, t)
    else:
        s, t = cert
        s = UniPoly([c if isinstance(c, AlgebraElement) else tower.const(c) for c in s.coeffs])
        t = UniPoly([c if isinstance(c, AlgebraElement) else tower.const(c) for c in t.coeffs])
    if not _check_cert(p, s, t):
        raise PreconditionError(f"{format_poly(p, name or 'X')} is not separable (certificate fails)")
    if name is None:
        name = (names or NameSupply()).fresh(tower)
    if name in tower.names:
        raise PreconditionError(f"generator name {name!r} already used")
    return tower.extend(name, p, (s, t))


def minimal_polynomial(x: AlgebraElement) -> UniPoly:
    """Monic polynomial over Q of least degree vanishing at x."""
    tower = x.tower
    if tower.trivial:
        return UniPoly([1])
    rows = []  # (pivot, vector, combination)
    power = tower.one()
    k = 0
    while True:
        vec = list(power.flat())
        comb = [_ZERO] * k + [_ONE]
        for piv, rv, rc in rows:
            c = vec[piv]
            if c != 0:
                vec = [a - c * b for a, b in zip(vec, rv)]
                comb = [a - c * b for a, b in zip(comb, rc + [_ZERO] * (len(comb) - len(rc)))]
        piv = next((i for i, a in enumerate(vec) if a != 0), None)
        if piv is None:
            return UniPoly(comb)
        inv = 1 / vec[piv]
        rows.append((piv, [a * inv for a in vec], [a * inv for a in comb]))
        power = power * x
        k += 1
