"""Newton-Puiseux expansion of plane curves over the dynamic closure of Q.

Given ``G(X, Y)`` monic in Y, the expansion finds a ramification index ``m``
and ``n`` power series ``alpha_i(T)`` with

    G(T^m, Y) = prod (Y - alpha_i)   mod T^(N+1).

Roots of the characteristic polynomials of Newton polygon edges are found
with :func:`dynalg.cover.factor_in_context`, so the base algebra grows by
separable extensions and splits along idempotents as the computation
demands.  Once a branch is isolated (a simple root of its edge polynomial)
it is finished by quadratic Newton iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

from gmpy2 import mpq

from .cover import CoverTree, factor_in_context
from .errors import InvariantError, NotMonicError, PreconditionError
from .exact_arith import UniPoly, format_rat
from .series import TruncatedSeries, format_series, poly_from_roots, ramify, substitute
from .split_value import SplitValue, sv_amalgamate, sv_const, sv_restrict
from .tower import QQ, NameSupply, SeparableTower, SplitCover, Zero, quasi_inverse

# generator names handed out before falling back to a1, a2, ...
DEFAULT_LETTERS = ("b", "c", "d", "f", "g", "h", "k", "l", "p", "q", "r", "s", "u", "v", "w", "z")


@dataclass(frozen=True)
class CurveInput:
    """``G = sum coeffs[i](X) * Y^i`` with rational coefficients, and the order N."""

    coeffs: tuple  # UniPoly in X over Q, ascending in Y
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise PreconditionError("order must be >= 0")
        if len(self.coeffs) < 2:
            raise PreconditionError("curve polynomial must have positive degree in Y")
        if self.coeffs[-1] != UniPoly([1]):
            raise NotMonicError("curve polynomial must be monic in Y")

    @classmethod
    def from_terms(cls, terms: dict, order: int):
        """From ``{(y_exp, x_exp): coeff}``."""
        n = max((i for (i, _), c in terms.items() if c != 0), default=0)
        rows = [dict() for _ in range(n + 1)]
        for (i, j), c in terms.items():
            if c != 0:
                rows[i][j] = rows[i].get(j, 0) + mpq(c)
        coeffs = []
        for row in rows:
            top = max(row, default=-1)
            coeffs.append(UniPoly([row.get(j, 0) for j in range(top + 1)]))
        return cls(tuple(coeffs), order)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def terms(self) -> dict:
        return {(i, j): c for i, f in enumerate(self.coeffs) for j, c in enumerate(f.coeffs) if c != 0}

    def at(self, m: int, tower: SeparableTower = QQ) -> list:
        """Coefficients of G(T^m, Y) as series of order N over ``tower``."""
        return [TruncatedSeries([tower.const(c) for c in f.inflate(m).coeffs[:self.order + 1]], self.order, tower)
                for f in self.coeffs]

    def __str__(self):
        from .parsing import format_terms

        return format_terms({(("Y", i), ("X", j)): c for (i, j), c in self.terms().items()})


@dataclass(frozen=True)
class Edge:
    slope: mpq  # common X-valuation of the roots on this edge
    length: int
    start: int = 0
    end: int = 0

    def __str__(self):
        return f"slope {format_rat(self.slope)}, length {self.length}"


def _valuation(f: UniPoly):
    return next((j for j, c in enumerate(f.coeffs) if c != 0), None)


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _edges(points):
    hull = _lower_hull(points)
    out = []
    for (ia, va), (ib, vb) in zip(hull, hull[1:]):
        out.append(Edge(mpq(va - vb, ib - ia), ib - ia, ia, ib))
    return out


def newton_polygon(G: CurveInput) -> list:
    """Lower-hull edges of the support, left to right (slopes nonincreasing)."""
    vals = [_valuation(f) for f in G.coeffs]
    low = [v for v in vals[:-1] if v is not None]
    if not low or min(low) > G.order:
        raise PreconditionError("all non-leading coefficients vanish to the requested order; "
                                "increase input order")
    return _edges([(i, v) for i, v in enumerate(vals) if v is not None])


# ---------------------------------------------------------------------------
# expansion

@dataclass(frozen=True)
class Cluster:
    """Roots ``alpha = P(T) + T^e * Y`` with Y a root of ``H`` of positive valuation.

    ``X = T^ram``; ``H`` is a list (ascending in Y) of exact polynomials in T;
    ``count`` roots of H belong to this cluster (all of them when ``top``).
    """

    ram: int
    prefix: UniPoly
    shift: int
    H: list
    count: int
    top: bool = False


@dataclass(frozen=True)
class Expansion:
    ram: int  # X = T^ram
    alpha: TruncatedSeries
    separated: bool = True


@dataclass
class PuiseuxResult:
    curve: CurveInput
    m: SplitValue
    tree: CoverTree
    branches: dict  # path -> [TruncatedSeries]
    leaf_m: dict  # path -> int
    diagnostics: list = field(default_factory=list)

    def leaf_towers(self):
        return {p: self.tree.node_at(p).tower for p in self.branches}

    def check(self) -> bool:
        return all(_product_ok(self.curve, self.leaf_m[p], self.tree.node_at(p).tower, alphas)
                   for p, alphas in self.branches.items())

    def render(self) -> str:
        lines = [f"m = {self.m}"]
        for path, alphas in self.branches.items():
            tower = self.tree.node_at(path).tower
            m = self.leaf_m[path]
            var = "X" if m == 1 else "T"
            labels = self.tree.labels_along(path)
            head = f"over {tower}" + (f" [{'; '.join(labels)}]" if labels else "")
            if m != 1:
                head += f", X = T^{m}"
            lines.append(head + ":")
            for a in alphas:
                lines.append("  " + render_factor(a, var))
        lines.extend(f"note: {d}" for d in self.diagnostics)
        return "\n".join(lines)


def render_factor(alpha: TruncatedSeries, var: str = "X") -> str:
    """``(Y-alpha)`` written like ``(Y+(-b-1/6)*X+...)``."""
    body = format_series(-alpha, var)
    if body == "0":
        return "(Y)"
    return f"(Y{body if body.startswith('-') else '+' + body})"


def _product_ok(curve: CurveInput, m: int, tower: SeparableTower, alphas) -> bool:
    return poly_from_roots(alphas, curve.order, tower) == curve.at(m, tower)


def _valuations(ctx, item: Cluster, carry, imax: int):
    """Decide the T-valuation of H[0..imax] on every leaf: ``[(ctx, item, carry, vals)]``."""
    out = []
    stack = [(ctx, item, carry, (), 0, 0)]
    while stack:
        ctx, item, carry, vals, i, j = stack.pop()
        forked = False
        while i <= imax:
            h = item.H[i] if i < len(item.H) else UniPoly()
            if j >= len(h.coeffs):
                vals, i, j = vals + (None,), i + 1, 0
                continue
            c = h.coeffs[j]
            if c.is_rational():
                if c.is_zero():
                    j += 1
                else:
                    vals, i, j = vals + (j,), i + 1, 0
                continue
            splits = ctx.case_split(c, (item, carry))
            if len(splits) == 1:
                ctx, (item, carry), tag = splits[0]
                if isinstance(tag, Zero):
                    j += 1
                else:
                    vals, i, j = vals + (j,), i + 1, 0
                continue
            for ctx2, (item2, carry2), tag in reversed(splits):
                if isinstance(tag, Zero):
                    stack.append((ctx2, item2, carry2, vals, i, j + 1))
                else:
                    stack.append((ctx2, item2, carry2, vals + (j,), i + 1, 0))
            forked = True
            break
        if not forked:
            out.append((ctx, item, carry, list(vals)))
    return out


def _unit_inverse(a):
    if a.is_rational():
        return 1 / a.to_rational()
    _, inv = quasi_inverse(a)
    if a * inv != 1:
        raise InvariantError(f"{a} was decided invertible but has no inverse")
    return inv


def _edge_poly(H, edge: Edge, p: int, q: int, beta: int, tower):
    cs = []
    for i in range(edge.start, edge.end + 1):
        num = beta - p * i
        if num % q == 0 and i < len(H):
            cs.append(H[i].coeff(num // q, tower.zero()))
        else:
            cs.append(tower.zero())
    inv = _unit_inverse(cs[-1])
    return UniPoly([c * inv for c in cs])


def _transform(H, c, p: int, q: int, beta: int):
    """``T^-beta * H(T^q, T^p * (c + Y))`` as a list ascending in Y."""
    tower = c.tower
    n = len(H) - 1
    powers = [tower.one()]
    for _ in range(n):
        powers.append(powers[-1] * c)
    scaled = [H[i].inflate(q).shift_up(p * i) if not H[i].is_zero() else H[i] for i in range(n + 1)]
    out = []
    for k in range(n + 1):
        acc = UniPoly()
        for i in range(k, n + 1):
            if scaled[i].is_zero():
                continue
            w = powers[i - k] * comb(i, k)
            acc = acc + (scaled[i] if w == 1 else scaled[i].scale(w))
        low = acc.coeffs[:beta]
        if any(not x.is_zero() for x in low):
            raise InvariantError("edge substitution left terms below the edge")
        out.append(UniPoly(acc.coeffs[beta:]))
    return out


def _newton_lift(H, K: int, tower):
    """Root of H with zero constant term, mod T^K (H_Y(0, 0) must be a unit)."""
    order = K - 1
    Hs = [TruncatedSeries(h.coeffs[:K], order, tower) for h in H]
    dHs = [Hs[k].scalar_mul(k) for k in range(1, len(Hs))]
    y = TruncatedSeries([], order, tower)
    for _ in range(K + 1):
        r = substitute(Hs, y)
        if r.is_zero():
            return y
        y = y - r * substitute(dHs, y).inverse()
    raise InvariantError("Newton iteration did not converge")


def _prefix_series(P: UniPoly, N: int, tower):
    return TruncatedSeries(P.coeffs[:N + 1], N, tower)


def _step(ctx, item: Cluster, carry, N: int, names, diagnostics):
    """Advance one cluster; returns ``[(ctx, new_clusters, new_expansions, carry)]``."""
    imax = item.count
    results = []
    for ctx1, item1, carry1, vals in _valuations(ctx, item, carry, imax):
        tower = ctx1.tower
        pts = [(i, v) for i, v in enumerate(vals) if v is not None]
        if not pts or pts[-1] != (imax, 0):
            raise InvariantError("cluster polynomial lost its unit coefficient")
        i0 = pts[0][0]
        zero_roots = [Expansion(item1.ram, _prefix_series(item1.prefix, N, tower))] * i0
        edges = _edges(pts)
        if not item1.top and any(e.slope <= 0 for e in edges):
            raise InvariantError("cluster polygon has a non-positive slope")
        frontier = [(ctx1, (item1, carry1, [], zero_roots))]
        for edge in edges:
            nxt = []
            for c_ctx, (it, car, new_items, new_done) in frontier:
                p, q = int(edge.slope.numerator), int(edge.slope.denominator)
                beta = vals[edge.start] * q + p * edge.start
                phi = _edge_poly(it.H, edge, p, q, beta, c_ctx.tower)
                state = (it, car, new_items, new_done)
                for leaf, (it2, car2, items2, done2), _, roots in factor_in_context(c_ctx, phi, names, state):
                    items2, done2 = list(items2), list(done2)
                    ltower = leaf.tower
                    for c, mult in roots:
                        ram, e = it2.ram * q, it2.shift * q + p
                        P = it2.prefix.inflate(q) + UniPoly.monomial(c, e)
                        H2 = _transform(it2.H, c, p, q, beta)
                        if mult == 1:
                            K = N + 1 - e
                            alpha = _prefix_series(P, N, ltower)
                            if K > 0:
                                y = _newton_lift(H2, K, ltower)
                                alpha = alpha + TruncatedSeries(
                                    [ltower.zero()] * e + list(y.coeffs), N, ltower)
                            done2.append(Expansion(ram, alpha))
                        elif e > N:
                            diagnostics.append(
                                f"{mult} branches agree to order {N} without separating; "
                                f"emitting the common expansion {mult} times")
                            done2 += [Expansion(ram, _prefix_series(P, N, ltower), False)] * mult
                        else:
                            items2.append(Cluster(ram, P, e, H2, mult))
                    nxt.append((leaf, (it2, car2, items2, done2)))
            frontier = nxt
        for leaf, (_, car, items, done) in frontier:
            results.append((leaf, items, done, car))
    return results


def newton_puiseux(G: CurveInput, names: NameSupply | None = None) -> PuiseuxResult:
    """Puiseux expansions of all ``n`` branches of ``G`` to order ``G.order``."""
    N, n = G.order, G.degree
    names = names or NameSupply(letters=DEFAULT_LETTERS)
    tree, ctx = CoverTree.start(QQ)
    H0 = [UniPoly([QQ.const(c) for c in f.coeffs]) for f in G.coeffs]
    top = Cluster(1, UniPoly(), 0, H0, n, True)
    diagnostics = []
    work = [(ctx, [top], [])]
    finished = []
    while work:
        ctx, pending, done = work.pop()
        if not pending:
            finished.append((ctx, done))
            continue
        item, rest = pending[0], pending[1:]
        steps = _step(ctx, item, (rest, done), N, names, diagnostics)
        for leaf, items, new_done, (rest2, done2) in reversed(steps):
            work.append((leaf, items + list(rest2), list(done2) + new_done))

    leaf_m, expansions = {}, {}
    for leaf, done in finished:
        if len(done) != n:
            raise InvariantError(f"leaf {leaf.path} has {len(done)} branches, expected {n}")
        leaf_m[leaf.path] = math.lcm(*(x.ram for x in done))
        expansions[leaf.path] = done
    m_root = _assemble_m(tree, tree.root, (), leaf_m)

    branches = {}
    for path in sorted(expansions):
        tower = tree.node_at(path).tower
        m = sv_restrict(m_root, tree.hom_along(path)).constant()
        leaf_m[path] = m
        alphas = [ramify(x.alpha, m // x.ram).truncate(N) for x in expansions[path]]
        alphas.sort(key=lambda a: [c.sort_key() for c in a.coeffs])
        if not _product_ok(G, m, tower, alphas):
            raise InvariantError(f"product of branches does not reproduce G on leaf {path}")
        branches[path] = alphas
    leaf_m = {p: leaf_m[p] for p in branches}
    return PuiseuxResult(G, m_root, tree, branches, leaf_m, list(dict.fromkeys(diagnostics)))


def _assemble_m(tree: CoverTree, node, path, leaf_m) -> SplitValue:
    """Ramification index as a split value over ``node``'s algebra."""
    if node.kind == "leaf":
        return sv_const(leaf_m.get(path, 1), node.tower)
    if node.kind == "extend":
        v = _assemble_m(tree, node.children[0], path + (0,), leaf_m)
        # idempotents of an extension need not come from below: use a common multiple
        return sv_const(v.constant() if v.is_constant() else math.lcm(*v.payloads()), node.tower)
    values = [_assemble_m(tree, child, path + (i,), leaf_m)
              for i, child in enumerate(node.children) if not child.trivial]
    return sv_amalgamate(SplitCover(node.tower, node.branches), values)
