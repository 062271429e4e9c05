"""Composite covers and root solving over the dynamic algebraic closure.

A :class:`CoverTree` is the trace of a computation: starting from one tower
it branches whenever the algebra is split along idempotents and grows a
child whenever a root of a separable polynomial is adjoined.  Every edge
carries its restriction homomorphism, so data can be pushed from the root to
any leaf (:meth:`CoverTree.restrict_along`).

Computations are written against a :class:`Context`, a handle on the current
leaf.  ``Context.split`` and ``Context.extend`` grow the tree and return the
new leaves together with the caller's state restricted onto them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .bezout import separable_associate
from .errors import InvariantError, NotMonicError, PreconditionError
from .exact_arith import UniPoly, format_poly, rat
from .tower import (
    QQ,
    AlgebraElement,
    Hom,
    NameSupply,
    SeparableTower,
    SplitCover,
    Zero,
    adjoin_root,
    is_invertible_split,
    map_elems,
)

try:
    from sympy import divisors as _divisors
except ImportError:  # pragma: no cover
    _divisors = None

# rational-root candidates are only enumerated below this size
_DIVISOR_LIMIT = 10 ** 12


class CoverNode:
    """Node of a cover tree; ``kind`` is ``leaf``, ``split`` or ``extend``."""

    __slots__ = ("tower", "kind", "children", "edges", "labels", "facts", "branches",
                 "provenance", "adjoined")

    def __init__(self, tower: SeparableTower):
        self.tower = tower
        self.kind = "leaf"
        self.children: list[CoverNode] = []
        self.edges: list[Hom] = []
        self.labels: list[str] = []
        self.facts: list[tuple] = []  # per child: ((element of this node, "zero" | "invertible"), ...)
        self.branches = []  # the SplitCover branches of a split node
        self.provenance = ""
        self.adjoined = None  # (name, minpoly) for extend nodes

    @property
    def trivial(self) -> bool:
        return self.tower.trivial


class CoverTree:
    def __init__(self, root: CoverNode):
        self.root = root

    @classmethod
    def start(cls, tower: SeparableTower):
        tree = cls(CoverNode(tower))
        return tree, Context(tree, tree.root, ())

    def node_at(self, path) -> CoverNode:
        node = self.root
        for k in path:
            if not 0 <= k < len(node.children):
                raise PreconditionError(f"invalid cover path {tuple(path)}")
            node = node.children[k]
        return node

    def hom_along(self, path) -> Hom:
        node = self.root
        hom = Hom.identity(node.tower)
        for k in path:
            if not 0 <= k < len(node.children):
                raise PreconditionError(f"invalid cover path {tuple(path)}")
            hom = hom.then(node.edges[k])
            node = node.children[k]
        return hom

    def restrict_along(self, x, path):
        """Push an element of the root algebra down to the node at ``path``."""
        node = self.root
        for k in path:
            if not 0 <= k < len(node.children):
                raise PreconditionError(f"invalid cover path {tuple(path)}")
            x = node.edges[k](x)
            node = node.children[k]
        return x

    def leaves(self, include_trivial: bool = False):
        """``[(path, node)]`` left to right."""
        out = []

        def walk(node, path):
            if node.kind == "leaf":
                if include_trivial or not node.trivial:
                    out.append((path, node))
                return
            for k, child in enumerate(node.children):
                walk(child, path + (k,))

        walk(self.root, ())
        return out

    def labels_along(self, path) -> list[str]:
        node, out = self.root, []
        for k in path:
            if node.labels[k] and node.kind == "split":
                out.append(node.labels[k])
            node = node.children[k]
        return out

    def leaf_facts(self, path):
        """Zero/invertible decisions made on the way to ``path``, restricted to that node.

        Returns ``[(decided element, its image at the node, kind)]``.
        """
        node, steps = self.root, []
        for depth, k in enumerate(path):
            if not 0 <= k < len(node.children):
                raise PreconditionError(f"invalid cover path {tuple(path)}")
            for x, kind in node.facts[k]:
                steps.append((x, depth, kind))
            node = node.children[k]
        out = []
        for x, depth, kind in steps:
            y = x
            for j in range(depth, len(path)):
                y = self.node_at(path[:j]).edges[path[j]](y)
            out.append((x, y, kind))
        return out

    def render(self) -> str:
        lines = [str(self.root.tower)]

        def walk(node, depth):
            for k, child in enumerate(node.children):
                pad = "  " * depth
                if node.kind == "extend":
                    name, poly = node.adjoined
                    head = f"adjoin {name}: {format_poly(poly, name)}"
                else:
                    head = f"[{node.labels[k]}]" if node.labels[k] else f"[branch {k + 1}]"
                mark = " (trivial)" if child.trivial else ""
                lines.append(f"{pad}{head} -> {child.tower}{mark}")
                walk(child, depth + 1)

        walk(self.root, 1)
        return "\n".join(lines)

    def to_json(self):
        from .serialize import poly_to_json, tower_to_json

        def node_json(node):
            doc = {"tower": tower_to_json(node.tower), "kind": node.kind}
            if node.provenance:
                doc["provenance"] = node.provenance
            if node.kind == "extend":
                doc["adjoin"] = {"name": node.adjoined[0], "minpoly": poly_to_json(node.adjoined[1])}
            if node.children:
                doc["children"] = [{"label": lab, "node": node_json(ch)}
                                   for lab, ch in zip(node.labels, node.children)]
            return doc

        return node_json(self.root)


class Context:
    """Handle on a leaf of a cover tree under construction."""

    __slots__ = ("tree", "node", "path")

    def __init__(self, tree: CoverTree, node: CoverNode, path: tuple):
        self.tree = tree
        self.node = node
        self.path = path

    @property
    def tower(self) -> SeparableTower:
        return self.node.tower

    def split(self, cover: SplitCover, state=None):
        """Split this leaf along ``cover``; returns ``[(ctx, state, i)]``.

        Only nontrivial branches are returned; ``i`` indexes ``cover.branches``.
        """
        if cover.parent != self.tower:
            raise PreconditionError("cover is not over this leaf's algebra")
        if self.node.kind != "leaf":
            raise InvariantError("only leaves can be split")
        nontriv = cover.nontrivial()
        if cover.identity and len(nontriv) == 1 and nontriv[0][1].tower == self.tower:
            return [(self, state, nontriv[0][0])]
        node = self.node
        node.kind = "split"
        node.provenance = cover.provenance
        out = []
        for i, b in enumerate(cover.branches):
            child = CoverNode(b.tower)
            node.children.append(child)
            node.edges.append(b.restrict)
            node.labels.append(b.label)
            node.facts.append(b.facts)
            node.branches.append(b)
            if not b.trivial:
                ctx = Context(self.tree, child, self.path + (i,))
                out.append((ctx, map_elems(state, b.restrict), i))
        return out

    def extend(self, p: UniPoly, state=None, names: NameSupply | None = None, provenance: str = ""):
        """Adjoin a root of ``p``; returns ``(ctx, state, generator)``."""
        if self.node.kind != "leaf":
            raise InvariantError("only leaves can be extended")
        names = names or NameSupply()
        name = names.fresh(self.tower)
        new = adjoin_root(self.tower, p, name=name)
        node = self.node
        node.kind = "extend"
        node.provenance = provenance or "separable extension"
        node.adjoined = (name, new.minpoly())
        child = CoverNode(new)
        hom = Hom.embedding(self.tower, new)
        node.children.append(child)
        node.edges.append(hom)
        node.labels.append(f"adjoin {name}")
        node.facts.append(())
        ctx = Context(self.tree, child, self.path + (0,))
        return ctx, map_elems(state, hom), new.gen(name)

    def case_split(self, x: AlgebraElement, state=None):
        """Split on ``x = 0`` versus ``x`` invertible: ``[(ctx, state, tag)]``."""
        if x.is_rational():
            from .tower import Invertible

            if x.is_zero():
                return [(self, state, Zero())]
            return [(self, state, Invertible(self.tower.const(1 / x.to_rational())))]
        cover, tags = is_invertible_split(x)
        return [(ctx, st, tags[i]) for ctx, st, i in self.split(cover, state)]


# ---------------------------------------------------------------------------
# root finding

def _as_tower_poly(f: UniPoly, tower: SeparableTower | None):
    if tower is None:
        r = f.ring()
        tower = QQ if r in (None, "Q") else r
    return tower, UniPoly([c if isinstance(c, AlgebraElement) else tower.const(c) for c in f.coeffs])


def divide_linear(f: UniPoly, w):
    """Synthetic division by X - w: returns (quotient, remainder)."""
    cs = f.coeffs
    if not cs:
        return UniPoly(), w * 0
    acc = cs[-1]
    out = [acc]
    for c in reversed(cs[:-1]):
        acc = c + acc * w
        out.append(acc)
    rem = out.pop()
    return UniPoly(list(reversed(out))), rem


def rational_roots(f: UniPoly) -> list:
    """Rational roots of a polynomial with rational coefficients.

    Ordered by absolute value, positive before negative.  Returns ``[]`` when
    the coefficients are too large to enumerate candidates cheaply.
    """
    cs = [rat(c.to_rational() if isinstance(c, AlgebraElement) else c) for c in f.coeffs]
    if len(cs) < 2:
        return []
    roots = []
    while cs and cs[0] == 0:
        cs.pop(0)
        if not roots:
            roots.append(mpq(0))
    if len(cs) < 2:
        return roots
    from math import lcm

    den = 1
    for c in cs:
        den = lcm(den, int(c.denominator))
    ints = [int(c * den) for c in cs]
    c0, lead = abs(ints[0]), abs(ints[-1])
    if c0 > _DIVISOR_LIMIT or lead > _DIVISOR_LIMIT or _divisors is None:
        return roots
    cands = sorted({mpq(p, q) for p in _divisors(c0) for q in _divisors(lead)})
    for c in cands:
        for cand in (c, -c):
            acc = mpq(0)
            for v in reversed(cs):
                acc = acc * cand + v
            if acc == 0:
                roots.append(cand)
    return roots


def known_root(h: UniPoly):
    """A root of ``h`` found without extending: linear, rational or ±generator."""
    tower = h.coeffs[0].tower
    if h.degree() == 1:
        return -h.coeffs[0] * (1 / h.coeffs[1].to_rational()) if h.coeffs[1].is_rational() else None
    if all(c.is_rational() for c in h.coeffs):
        rr = rational_roots(h)
        if rr:
            return tower.const(rr[0])
    for g in tower.gens():
        for cand in (g, -g):
            if h.evaluate(cand).is_zero():
                return cand
    return None


def _solve(ctx: Context, f: UniPoly, state, names: NameSupply):
    """Per leaf ``(ctx, state, f, witness)`` with ``f(witness) = 0``."""
    cover, assocs = separable_associate(f)
    out = []
    for child, st, i in ctx.split(cover, state):
        assoc = assocs[i]
        h, fr = assoc.h, assoc.f
        w = known_root(h)
        if w is not None:
            out.append((child, st, fr, w))
            continue
        n = h.degree()
        sigma = h.coeffs[n - 1] * mpq(1, n)
        depressed = h.compose_shift(-sigma)
        leaf, (st2, fr2, sigma2), gen = child.extend(
            depressed, (st, fr, sigma), names, provenance=f"root of separable associate {h}")
        out.append((leaf, st2, fr2, gen - sigma2))
    return out


@dataclass
class SolveResult:
    tree: CoverTree
    witnesses: dict  # path -> AlgebraElement
    polys: dict  # path -> restricted f

    def check(self) -> bool:
        return all(self.polys[p].evaluate(w).is_zero() for p, w in self.witnesses.items())


def _check_monic_nonconstant(f: UniPoly):
    if f.degree() < 1:
        raise PreconditionError("polynomial must be nonconstant")
    if not f.is_monic():
        raise NotMonicError(f"{f} is not monic")


def solve_monic(f: UniPoly, tower: SeparableTower | None = None,
                names: NameSupply | None = None) -> SolveResult:
    """A root of the monic polynomial ``f`` on every leaf of a cover."""
    tower, f = _as_tower_poly(f, tower)
    _check_monic_nonconstant(f)
    names = names or NameSupply()
    tree, ctx = CoverTree.start(tower)
    res = SolveResult(tree, {}, {})
    for leaf, _, fr, w in _solve(ctx, f, None, names):
        res.witnesses[leaf.path] = w
        res.polys[leaf.path] = fr
    return res


@dataclass
class LeafRoots:
    tower: SeparableTower
    poly: UniPoly
    roots: list  # [(AlgebraElement, multiplicity)]
    labels: list = field(default_factory=list)

    def check(self) -> bool:
        if sum(m for _, m in self.roots) != self.poly.degree():
            return False
        prod = UniPoly([self.tower.one()])
        for r, m in self.roots:
            prod = prod * UniPoly([-r, self.tower.one()]) ** m
        return prod == self.poly


@dataclass
class RootReport:
    leaves: dict  # path -> LeafRoots

    def check(self) -> bool:
        return all(leaf.check() for leaf in self.leaves.values())


def _deflate(ctx: Context, f: UniPoly, w, mult: int, state):
    """Strip (X - w) from f as often as it divides, splitting as needed."""
    while True:
        q, r = divide_linear(f, w)
        if r.is_zero():
            f, mult = q, mult + 1
            continue
        if r.is_rational():
            return [(ctx, f, w, mult, state)]
        out = []
        for child, (f2, w2, st2), tag in ctx.case_split(r, (f, w, state)):
            if isinstance(tag, Zero):
                out.extend(_deflate(child, f2, w2, mult, st2))
            else:
                out.append((child, f2, w2, mult, st2))
        return out


def _factor(ctx: Context, f: UniPoly, state, names: NameSupply):
    """Per leaf ``(ctx, state)`` where state = (original f, roots so far)."""
    if f.degree() < 1:
        return [(ctx, state)]
    if f.degree() == 1:
        orig, roots = state
        return [(ctx, (orig, roots + [(-f.coeffs[0], 1)]))]
    out = []
    for leaf, st, fr, w in _solve(ctx, f, state, names):
        q, r = divide_linear(fr, w)
        if not r.is_zero():
            raise InvariantError("solve_monic witness is not a root")
        for leaf2, q2, w2, mult, (orig, roots) in _deflate(leaf, q, w, 1, st):
            out.extend(_factor(leaf2, q2, (orig, roots + [(w2, mult)]), names))
    return out


def factor_linear(f: UniPoly, tower: SeparableTower | None = None,
                  names: NameSupply | None = None):
    """Split ``f`` into linear factors on every leaf: ``(tree, RootReport)``."""
    tower, f = _as_tower_poly(f, tower)
    _check_monic_nonconstant(f)
    names = names or NameSupply()
    tree, ctx = CoverTree.start(tower)
    return tree, _report(tree, factor_in_context(ctx, f, names))


def factor_in_context(ctx: Context, f: UniPoly, names: NameSupply, state=None):
    """Like :func:`factor_linear` inside an ongoing computation.

    Returns ``[(ctx, state, f, roots)]`` per new leaf.
    """
    out = []
    for leaf, (packed, roots) in _factor(ctx, f, ((f, state), []), names):
        fr, st = packed
        out.append((leaf, st, fr, roots))
    return out


def _report(tree: CoverTree, results) -> RootReport:
    leaves = {}
    for leaf, _, fr, roots in results:
        leaves[leaf.path] = LeafRoots(leaf.tower, fr, roots, tree.labels_along(leaf.path))
    return RootReport(leaves)
