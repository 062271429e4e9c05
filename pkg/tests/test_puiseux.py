import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from dynalg.cover import factor_linear
from dynalg.errors import NotMonicError, PreconditionError
from dynalg.exact_arith import UniPoly
from dynalg.puiseux import CurveInput, newton_polygon, newton_puiseux, render_factor
from dynalg.series import TruncatedSeries, substitute
from helpers import qpoly, random_curve_terms, rng_from

seeds = st.integers(min_value=0, max_value=10**6)
QUARTIC = {(4, 0): 1, (2, 0): -3, (1, 1): 1, (0, 2): 1}


def curve(terms, order):
    return CurveInput.from_terms(terms, order)


def edges(G):
    return [(e.slope, e.length) for e in newton_polygon(G)]


class TestNewtonPolygon:
    def test_square_root(self):
        assert edges(curve({(2, 0): 1, (0, 1): -1}, 4)) == [(mpq(1, 2), 2)]

    def test_line(self):
        assert edges(curve({(1, 0): 1, (0, 1): -1}, 4)) == [(1, 1)]

    def test_quartic_curve(self):
        # hull of (4,0), (2,0), (1,1), (0,2) read from the left: slope 1 then slope 0
        assert sorted(edges(curve(QUARTIC, 5))) == [(0, 2), (1, 2)]

    def test_power_of_y_needs_more_order(self):
        with pytest.raises(PreconditionError, match="increase input order"):
            newton_polygon(curve({(2, 0): 1, (0, 4): 1}, 3))


class TestCurveInput:
    def test_monic_required(self):
        with pytest.raises(NotMonicError):
            curve({(2, 0): 2, (0, 1): 1}, 3)

    def test_degree_required(self):
        with pytest.raises(PreconditionError):
            curve({(0, 1): 1}, 3)

    def test_str(self):
        assert str(curve(QUARTIC, 5)) == "Y^4-3*Y^2+X*Y+X^2"


def leaf_strings(res):
    return {str(res.tree.node_at(p).tower): [str(a) for a in alphas] for p, alphas in res.branches.items()}


class TestExpansion:
    def test_line(self):
        res = newton_puiseux(curve({(1, 0): 1, (0, 1): -1}, 5))
        assert res.m.constant() == 1
        assert leaf_strings(res) == {"Q": ["T"]}

    def test_square_root_of_one_plus_x(self):
        res = newton_puiseux(curve({(2, 0): 1, (0, 0): -1, (0, 1): -1}, 2))
        assert res.m.constant() == 1
        ((path, alphas),) = res.branches.items()
        assert res.tree.node_at(path).tower.depth == 0
        expected = TruncatedSeries([1, mpq(1, 2), mpq(-1, 8)], 2)
        assert sorted(map(str, alphas)) == sorted([str(expected), str(-expected)])

    def test_square_root_of_x(self):
        res = newton_puiseux(curve({(2, 0): 1, (0, 1): -1}, 3))
        assert res.m.constant() == 2
        assert leaf_strings(res) == {"Q": ["-T", "T"]} or leaf_strings(res) == {"Q": ["T", "-T"]}

    def test_cusp(self):
        res = newton_puiseux(curve({(3, 0): 1, (0, 2): -1}, 4))
        assert res.m.constant() == 3 and res.check()
        ((path, alphas),) = res.branches.items()
        tower = res.tree.node_at(path).tower
        assert tower.degrees == (2,)
        assert all((a[2] ** 3) == 1 for a in alphas)

    def test_quartic_example(self):
        res = newton_puiseux(curve(QUARTIC, 5))
        assert res.m.constant() == 1 and res.check()
        ((path, alphas),) = res.branches.items()
        assert str(res.tree.node_at(path).tower) == "Q[b,c | b^2-13/36, c^2-3]"
        assert [render_factor(a) for a in alphas] == [
            "(Y+(-b-1/6)*X+(-31/351*b-7/162)*X^3+(-1415/41067*b-29/1458)*X^5)",
            "(Y+(b-1/6)*X+(31/351*b-7/162)*X^3+(1415/41067*b-29/1458)*X^5)",
            "(Y-c+1/6*X+5/72*c*X^2+7/162*X^3+185/10368*c*X^4+29/1458*X^5)",
            "(Y+c+1/6*X-5/72*c*X^2+7/162*X^3-185/10368*c*X^4+29/1458*X^5)",
        ]

    def test_render(self):
        text = newton_puiseux(curve({(2, 0): 1, (0, 1): -1}, 3)).render()
        assert text.splitlines()[:2] == ["m = 2", "over Q, X = T^2:"]

    def test_deterministic(self):
        G = curve(QUARTIC, 5)
        assert newton_puiseux(G).render() == newton_puiseux(G).render()


def random_result(seed, order, n=None):
    rng = rng_from(seed)
    G = curve(random_curve_terms(rng, n=n or rng.randint(1, 3)), order)
    return G, newton_puiseux(G)


@settings(max_examples=15)
@given(seeds)
def test_product_and_substitution(seed):
    G, res = random_result(seed, 5)
    assert res.check()
    for path, alphas in res.branches.items():
        tower = res.tree.node_at(path).tower
        m = res.leaf_m[path]
        coeffs = G.at(m, tower)
        assert len(alphas) == G.degree
        for a in alphas:
            assert substitute(coeffs, a).is_zero()


@settings(max_examples=15)
@given(seeds)
def test_constant_terms_factor_the_fiber(seed):
    G, res = random_result(seed, 4)
    fiber = UniPoly([f.coeffs[0] if f.coeffs else 0 for f in G.coeffs])
    v = next(i for i, c in enumerate(fiber.coeffs) if c != 0)
    nonzero_part = UniPoly(fiber.coeffs[v:])
    _, report = factor_linear(nonzero_part) if nonzero_part.degree() > 0 else (None, None)
    expected_count = nonzero_part.degree()
    if report is not None:
        assert all(sum(m for _, m in leaf.roots) == expected_count for leaf in report.leaves.values())
    for path, alphas in res.branches.items():
        tower = res.tree.node_at(path).tower
        consts = [a[0] for a in alphas if not a[0].is_zero()]
        assert len(consts) == expected_count
        prod = UniPoly([tower.one()])
        for c in consts:
            prod = prod * UniPoly([-c, tower.one()])
        assert prod == nonzero_part.map(tower.const)


@settings(max_examples=10)
@given(seeds)
def test_more_order_keeps_low_coefficients(seed):
    G, low = random_result(seed, 3)
    H = CurveInput(G.coeffs, 5)
    high = newton_puiseux(H)
    if low.diagnostics or high.diagnostics:
        return
    lows = {str(low.tree.node_at(p).tower): (low.leaf_m[p], a) for p, a in low.branches.items()}
    for p, alphas in high.branches.items():
        key = str(high.tree.node_at(p).tower)
        if key not in lows:
            continue
        m, la = lows[key]
        if m != high.leaf_m[p]:
            continue
        cut = sorted(str(a.with_order(3)) for a in alphas)
        assert cut == sorted(str(a) for a in la)
