"""Discrete values that vary across the components of a split algebra.

A :class:`SplitValue` is a formal sum ``e1*b1 + ... + ek*bk`` where the
``ei`` form a fundamental system of orthogonal idempotents and the ``bi``
are integers or string tags.  It is kept canonical: equal payloads are merged
and zero idempotents dropped, terms sorted by payload.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, RingMismatchError
from .tower import QQ, AlgebraElement, Hom, SeparableTower, SplitCover, map_elems


def _payload_key(b):
    return (0, b, "") if isinstance(b, int) else (1, 0, str(b))


def _check_payload(b):
    if isinstance(b, bool) or not isinstance(b, (int, str)):
        raise PreconditionError(f"payload must be an integer or a string tag, got {b!r}")


@dataclass(frozen=True)
class SplitValue:
    owner: SeparableTower
    terms: tuple  # ((idempotent, payload), ...) canonical

    def payloads(self):
        return [b for _, b in self.terms]

    def is_constant(self) -> bool:
        return len(self.terms) <= 1

    def constant(self):
        """The payload of a one-term value."""
        if len(self.terms) != 1:
            raise PreconditionError(f"{self} is not constant")
        return self.terms[0][1]

    def __str__(self):
        if not self.terms:
            return "(empty)"
        if len(self.terms) == 1:
            return str(self.terms[0][1])
        return " + ".join(f"({e})·{b}" for e, b in self.terms)


def _canonical(owner: SeparableTower, terms) -> SplitValue:
    if owner.trivial:
        return SplitValue(owner, ())
    merged = {}
    for e, b in terms:
        _check_payload(b)
        merged[b] = merged[b] + e if b in merged else e
    out = tuple(sorted(((e, b) for b, e in merged.items() if not e.is_zero()),
                       key=lambda t: _payload_key(t[1])))
    return SplitValue(owner, out)


def sv_make(terms, owner: SeparableTower | None = None) -> SplitValue:
    """Canonical value from ``[(e, b), ...]`` after checking the idempotents."""
    if owner is None:
        owner = next((e.tower for e, _ in terms if isinstance(e, AlgebraElement)), QQ)
    es = []
    for e, b in terms:
        if isinstance(e, AlgebraElement):
            if e.tower != owner:
                raise RingMismatchError("idempotent from another tower")
        else:
            e = owner.const(e)
        es.append((e, b))
    if not owner.trivial:
        total = owner.zero()
        for i, (e, _) in enumerate(es):
            if e * e != e:
                raise PreconditionError(f"{e} is not idempotent")
            for f, _ in es[i + 1:]:
                if not (e * f).is_zero():
                    raise PreconditionError("idempotents are not orthogonal")
            total = total + e
        if total != 1:
            raise PreconditionError(f"idempotents sum to {total}, not 1")
    return _canonical(owner, es)


def sv_const(b, owner: SeparableTower = QQ) -> SplitValue:
    return _canonical(owner, [(owner.one(), b)])


def sv_restrict(v: SplitValue, along: Hom) -> SplitValue:
    if v.owner != along.source:
        raise RingMismatchError("restriction map does not start at the value's owner")
    return _canonical(along.target, [(along(e), b) for e, b in v.terms])


@dataclass(frozen=True)
class Comparison:
    equal: bool
    witness: tuple | None = None  # (b_i, c_j) with b_i != c_j and e_i d_j != 0

    def __bool__(self):
        return self.equal


def sv_eq(u: SplitValue, v: SplitValue) -> Comparison:
    """Equal iff every pair of distinct payloads sits on disjoint components."""
    if u.owner != v.owner:
        raise RingMismatchError("split values over different towers")
    for e, b in u.terms:
        for d, c in v.terms:
            if b != c and not (e * d).is_zero():
                return Comparison(False, (b, c))
    return Comparison(True)


def sv_amalgamate(cover: SplitCover, values) -> SplitValue:
    """Assemble per-branch values (one per nontrivial branch) on the parent."""
    nontriv = cover.nontrivial()
    if len(values) == len(cover.branches) and len(values) != len(nontriv):
        values = [values[i] for i, _ in nontriv]
    if len(values) != len(nontriv):
        raise PreconditionError(f"expected {len(nontriv)} values, got {len(values)}")
    terms = []
    for (_, br), v in zip(nontriv, values):
        if not isinstance(v, SplitValue):
            v = sv_const(v, br.tower)
        if v.owner != br.tower:
            raise RingMismatchError("value does not live on its branch")
        for e, b in v.terms:
            terms.append((br.idempotent * br.lift(e), b))
    return _canonical(cover.parent, terms)


@map_elems.register
def _(obj: SplitValue, hom):
    if obj.owner != hom.source:
        return obj
    return sv_restrict(obj, hom)
