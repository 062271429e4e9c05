"""JSON-ready encodings of towers, elements, polynomials and series.

Rationals are written as strings ``"p/q"`` (or ``"p"`` for integers) so
documents never contain floats.  An element of a tower of depth ``k`` is a
nested list mirroring its normal form.
"""

from __future__ import annotations

from .errors import ParseError, PreconditionError
from .exact_arith import BigRational, UniPoly, format_poly, format_rat, rat
from .tower import QQ, AlgebraElement, Level, SeparableTower


def rat_to_json(q) -> str:
    return format_rat(q)


def rat_from_json(text) -> BigRational:
    if not isinstance(text, str):
        raise ParseError(f"rational must be a string, got {text!r}", 0)
    try:
        return rat(text)
    except PreconditionError:
        raise ParseError(f"not a rational: {text!r}", 0) from None


def _rep_to_json(rep):
    if isinstance(rep, tuple):
        return [_rep_to_json(r) for r in rep]
    return rat_to_json(rep)


def _rep_from_json(data, tower: SeparableTower, k: int):
    if k == 0:
        return rat_from_json(data)
    d = tower.levels[k - 1].degree
    if not isinstance(data, list) or len(data) != d:
        raise ParseError(f"element at level {k} must be a list of {d} entries", 0)
    return tuple(_rep_from_json(x, tower, k - 1) for x in data)


def elem_to_json(x):
    if isinstance(x, AlgebraElement):
        return _rep_to_json(x.rep)
    return rat_to_json(x)


def elem_from_json(data, tower: SeparableTower) -> AlgebraElement:
    if tower.trivial:
        return tower.zero()
    return AlgebraElement(tower, _rep_from_json(data, tower, tower.depth))


def poly_to_json(f: UniPoly):
    """Ascending coefficient list."""
    return [elem_to_json(c) for c in f.coeffs]


def poly_from_json(data, tower: SeparableTower | None = None) -> UniPoly:
    if tower is None:
        return UniPoly([rat_from_json(c) for c in data])
    return UniPoly([elem_from_json(c, tower) for c in data])


def tower_to_json(t: SeparableTower):
    if t.trivial:
        return {"trivial": True, "levels": []}
    levels = []
    for lv in t.levels:
        levels.append({
            "name": lv.name,
            "minpoly": [_rep_to_json(r) for r in lv.minpoly],
            "cert_s": [_rep_to_json(r) for r in lv.cert_s],
            "cert_t": [_rep_to_json(r) for r in lv.cert_t],
            "text": format_poly(t.minpoly(len(levels) + 1), lv.name),
        })
    return {"trivial": False, "levels": levels, "text": str(t)}


def tower_from_json(data) -> SeparableTower:
    if data.get("trivial"):
        return SeparableTower(trivial=True)
    tower = QQ
    for lv in data["levels"]:
        k = tower.depth
        reps = lambda key: tuple(_rep_from_json(r, tower, k) for r in lv.get(key, []))
        tower = SeparableTower(tower.levels + (Level(lv["name"], reps("minpoly"), reps("cert_s"),
                                                     reps("cert_t")),))
    return tower


def series_to_json(u):
    return {"order": u.order, "coeffs": [elem_to_json(c) for c in u.coeffs]}


def series_from_json(data, tower: SeparableTower):
    from .series import TruncatedSeries

    return TruncatedSeries([elem_from_json(c, tower) for c in data["coeffs"]], int(data["order"]), tower)


__all__ = [
    "rat_to_json", "rat_from_json", "elem_to_json", "elem_from_json", "poly_to_json",
    "poly_from_json", "tower_to_json", "tower_from_json", "series_to_json", "series_from_json",
]
