"""Acceptance criteria, each run at its stated tolerance and time budget.

Every criterion prints one PASS/FAIL line (also collected into the terminal
summary).  Covers produced while checking criteria 2-5 are kept for the
round-trip checks of criterion 6.
"""

import itertools
import time

import pytest
import sympy
from gmpy2 import mpq

import conftest
from dynalg.bezout import gcd_split, naive_gcd, separable_associate
from dynalg.cli import parse_tower
from dynalg.cover import factor_linear
from dynalg.exact_arith import UniPoly
from dynalg.parsing import to_poly
from dynalg.puiseux import CurveInput, newton_puiseux, render_factor
from dynalg.series import substitute
from dynalg.tower import QQ, SplitCover, amalgamate, quasi_inverse
from helpers import (
    SPLITTING,
    X,
    curve_to_sympy,
    qpoly,
    random_curve_terms,
    random_element,
    random_monic,
    random_tower,
    rng_from,
    to_sympy,
)

COVERS = {2: [], 3: [], 4: [], 5: []}


def report(number, title, ok, elapsed, budget=None, detail=""):
    timing = f"{elapsed:.2f}s" + (f" (budget {budget}s)" if budget else "")
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{timing}]" + (f"  {detail}" if detail else "")
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def keep(number, cover):
    if cover is not None and not cover.identity and len(cover.nontrivial()) > 1:
        COVERS[number].append(cover)


# -- 1 -------------------------------------------------------------------------

QUARTIC_FACTORS = [
    "(Y+(-b-1/6)*X+(-31/351*b-7/162)*X^3+(-1415/41067*b-29/1458)*X^5)",
    "(Y+(b-1/6)*X+(31/351*b-7/162)*X^3+(1415/41067*b-29/1458)*X^5)",
    "(Y-c+1/6*X+5/72*c*X^2+7/162*X^3+185/10368*c*X^4+29/1458*X^5)",
    "(Y+c+1/6*X-5/72*c*X^2+7/162*X^3-185/10368*c*X^4+29/1458*X^5)",
]


def test_criterion_1_quartic_example():
    start = time.perf_counter()
    res = newton_puiseux(CurveInput.from_terms({(4, 0): 1, (2, 0): -3, (1, 1): 1, (0, 2): 1}, 5))
    elapsed = time.perf_counter() - start
    ((path, alphas),) = res.branches.items()
    tower = res.tree.node_at(path).tower
    b, c = tower.gen("b"), tower.gen("c")
    ok = (
        str(tower) == "Q[b,c | b^2-13/36, c^2-3]"
        and b * b == mpq(13, 36) and c * c == 3
        and res.m.constant() == 1
        and [render_factor(a) for a in alphas] == QUARTIC_FACTORS
        and res.check()
        and elapsed < 2
    )
    # the coefficients one by one, as exact rationals
    a1, a2, a3, a4 = alphas
    ok = ok and a1[1] == b + mpq(1, 6) and a1[3] == mpq(31, 351) * b + mpq(7, 162)
    ok = ok and a1[5] == mpq(1415, 41067) * b + mpq(29, 1458)
    ok = ok and a3[0] == c and a3[1] == mpq(-1, 6) and a3[2] == mpq(-5, 72) * c
    ok = ok and a3[3] == mpq(-7, 162) and a3[4] == mpq(-185, 10368) * c and a3[5] == mpq(-29, 1458)
    ok = ok and a2[1] == -b + mpq(1, 6) and a4[0] == -c
    assert report(1, "quartic example reproduced exactly over Q[b,c]", ok, elapsed, 2)


# -- 2 -------------------------------------------------------------------------

def curve_corpus():
    fixed = [
        {(2, 0): 1, (0, 1): -1},  # Y^2 - X
        {(2, 0): 1, (0, 0): -1, (0, 1): -1},  # Y^2 - (1 + X)
        {(3, 0): 1, (0, 2): -1},  # Y^3 - X^2
        {(4, 0): 1, (2, 0): -3, (1, 1): 1, (0, 2): 1},
    ]
    rng = rng_from(2024)
    randomized = [random_curve_terms(rng, n=rng.randint(2, 4)) for _ in range(17)]
    return fixed + randomized


def walk(node):
    yield node
    for child in node.children:
        yield from walk(child)


def test_criterion_2_product_reconstruction():
    corpus = curve_corpus()
    start = time.perf_counter()
    failures = []
    for terms in corpus:
        # separability over Q(X): the discriminant in Y is not identically zero
        assert sympy.discriminant(curve_to_sympy(terms), sympy.Symbol("Y")) != 0
        G = CurveInput.from_terms(terms, 8)
        res = newton_puiseux(G)
        for path, alphas in res.branches.items():
            tower = res.tree.node_at(path).tower
            coeffs = G.at(res.leaf_m[path], tower)
            if not res.check() or any(not substitute(coeffs, a).is_zero() for a in alphas):
                failures.append(str(G))
        for node in walk(res.tree.root):
            if node.kind == "split":
                keep(2, SplitCover(node.tower, node.branches))
    elapsed = time.perf_counter() - start
    ok = not failures and len(corpus) >= 20 and elapsed < 60
    assert report(2, f"prod(Y - alpha_i) = G(T^m, Y) mod T^9 on {len(corpus)} curves", ok, elapsed, 60,
                  "; ".join(failures))


# -- 3 -------------------------------------------------------------------------

def test_criterion_3_quasi_inverse():
    start = time.perf_counter()
    bad = 0
    for seed in range(200):
        rng = rng_from(seed)
        T = random_tower(rng, max_degree=4)
        x = random_element(rng, T)
        cover, xs = quasi_inverse(x)
        keep(3, cover)
        e = x * xs
        if not (x * xs * x == x and xs * x * xs == xs and e * e == e):
            bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 30
    assert report(3, "x x* x = x, x* x x* = x*, (x x*)^2 = x x* on 200 elements", ok, elapsed, 30,
                  f"{bad} violations" if bad else "")


# -- 4 -------------------------------------------------------------------------

def random_q_poly(rng, degree):
    return UniPoly([mpq(rng.randint(-5, 5), rng.choice([1, 2, 3])) for _ in range(degree + 1)])


def test_criterion_4_bezout():
    start = time.perf_counter()
    bad, oracle_bad = 0, 0
    for seed in range(100):
        rng = rng_from(10_000 + seed)
        common = random_q_poly(rng, rng.randint(0, 2))
        a = random_q_poly(rng, rng.randint(0, 5)) * common
        b = random_q_poly(rng, rng.randint(0, 5)) * common
        cover, certs = gcd_split(a, b)
        if not certs[0].check():
            bad += 1
        g = certs[0].g
        if g != naive_gcd(a, b):
            oracle_bad += 1
        if not (a.is_zero() and b.is_zero()):
            expected = sympy.Poly(sympy.gcd(to_sympy(a).as_expr(), to_sympy(b).as_expr()), X).monic()
            if to_sympy(g).as_expr() != expected.as_expr():
                oracle_bad += 1
    for seed in range(100):
        rng = rng_from(20_000 + seed)
        T = random_tower(rng, depth=rng.randint(1, 3), max_degree=3, split_bias=0.8)
        a = random_monic(rng, T, rng.randint(1, 4), spread=2)
        b = random_monic(rng, T, rng.randint(1, 3), spread=2)
        if rng.random() < 0.5:
            a = a * b
        cover, certs = gcd_split(a, b)
        keep(4, cover)
        if not cover.check_fundamental() or any(not certs[i].check() for i, _ in cover.nontrivial()):
            bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and oracle_bad == 0 and elapsed < 30
    assert report(4, "Bezout certificates on 200 pairs, gcd over Q matches naive Euclid and sympy", ok,
                  elapsed, 30, f"{bad} certificate and {oracle_bad} oracle failures" if not ok else "")


# -- 5 -------------------------------------------------------------------------

def test_criterion_5_separable_associate():
    start = time.perf_counter()
    bad = 0
    for seed in range(100):
        rng = rng_from(30_000 + seed)
        f = UniPoly([mpq(1)])
        while True:
            k = rng.randint(1, 3)
            factor = UniPoly([mpq(rng.randint(-4, 4), rng.choice([1, 2])) for _ in range(k)] + [mpq(1)])
            power = rng.randint(1, 3)
            if f.degree() + k * power > 8:
                break
            f = f * factor ** power
        if f.degree() < 1:
            f = qpoly(-1, 1) ** 2
        cover, assocs = separable_associate(f)
        keep(5, cover)
        s = assocs[0]
        ok = s.check() and s.f == f and s.h * s.g == f and s.q * s.g == f.derivative()
        ok = ok and s.r * s.h + s.s * s.q == qpoly(1)
        _, hc = gcd_split(s.h, s.h.derivative())
        ok = ok and hc[0].g == qpoly(1)
        # oracle: the squarefree part computed by sympy
        ok = ok and to_sympy(s.h).as_expr() == sympy.Poly(sympy.sqf_part(to_sympy(f).as_expr()), X).monic().as_expr()
        bad += not ok
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 20
    assert report(5, "f = h g, f' = q g, r h + s q = 1 and gcd(h, h') = 1 on 100 inputs", ok, elapsed, 20,
                  f"{bad} failures" if bad else "")


# -- 6 -------------------------------------------------------------------------

def test_criterion_6_crt_round_trip():
    if not any(COVERS.values()):
        pytest.skip("run together with criteria 2-5")
    start = time.perf_counter()
    rng = rng_from(6)
    bad, count = 0, 0
    for number, covers in COVERS.items():
        for cover in covers:
            count += 1
            branches = cover.nontrivial()
            for _ in range(20):
                x = random_element(rng, cover.parent)
                if amalgamate(cover, [b.restrict(x) for _, b in branches]) != x:
                    bad += 1
                parts = [random_element(rng, b.tower) for _, b in branches]
                y = amalgamate(cover, parts)
                if [b.restrict(y) for _, b in branches] != parts:
                    bad += 1
    elapsed = time.perf_counter() - start
    sizes = ", ".join(f"{len(v)} from {k}" for k, v in COVERS.items())
    ok = bad == 0 and count > 0
    assert report(6, f"restrict/amalgamate round trips on {count} splitting covers ({sizes})", ok, elapsed,
                  detail=f"{bad} failures" if bad else "")


# -- 7 -------------------------------------------------------------------------

def tower_points(tower):
    """All complex points of a tower as ``[{name: sympy number}]`` (brute force)."""
    points = [{}]
    for k, name in enumerate(tower.names, start=1):
        nxt = []
        for pt in points:
            p = tower.minpoly(k)
            coeffs = [sym_eval(c, pt) for c in p.coeffs]
            z = sympy.Symbol("z")
            expr = sum(c * z ** i for i, c in enumerate(coeffs))
            for root, mult in sympy.roots(sympy.Poly(expr, z)).items():
                nxt.append({**pt, name: root})
        points = nxt
    return points


def sym_eval(x, point):
    if not hasattr(x, "monomials"):
        return sympy.Rational(int(mpq(x).numerator), int(mpq(x).denominator))
    total = sympy.Integer(0)
    for exps, c in x.monomials().items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for name, e in zip(x.tower.names, exps):
            term *= point[name] ** e
        total += term
    return sympy.expand(total)


def is_zero(v):
    return sympy.simplify(v) == 0


CRITERION_7_INPUTS = [
    ("a:a^2-a", "X^2-X"),
    ("a:a^2-a", "X^2-a*X"),
    ("a:a^2-a", "X^2+(a-1)*X"),
    ("a:a^2-a", "X^2-2*a"),
    ("a:a^2-a", "X^3-a*X^2-X+a"),
    ("a:a^2-a,b:b^2-b", "X^2-(a+b)*X+a*b"),
]


def test_criterion_7_splitting_semantics():
    from dynalg.cli import main
    import io

    start = time.perf_counter()
    problems = []
    for spec, text in CRITERION_7_INPUTS:
        root = parse_tower(spec)
        f = to_poly(text, root)
        tree, rep = factor_linear(f, root)
        if not rep.check():
            problems.append(f"{text}: product identity")
        covered = set()
        for path, leaf in rep.leaves.items():
            for q in tower_points(leaf.tower):
                # the root-tower point this leaf point lies over
                p = {g: sym_eval(tree.restrict_along(root.gen(g), path), q) for g in root.names}
                key = tuple(sympy.nsimplify(p[g]) for g in root.names)
                covered.add(key)
                for x, y, kind in tree.leaf_facts(path):
                    at_leaf = is_zero(sym_eval(y, q))
                    if at_leaf != (kind == "zero"):
                        problems.append(f"{text}: tag {kind} of {x} at {key}")
                    if x.tower == root and is_zero(sym_eval(x, p)) != (kind == "zero"):
                        problems.append(f"{text}: tag {kind} of {x} disagrees with evaluation at {key}")
                # brute-force roots of f specialised at the point
                fp = sympy.Poly(sum(sym_eval(c, p) * X ** i for i, c in enumerate(f.coeffs)), X)
                want = sorted((sympy.nsimplify(r), m) for r, m in sympy.roots(fp).items())
                got = {}
                for r, m in leaf.roots:
                    v = sympy.nsimplify(sym_eval(r, q))
                    got[v] = got.get(v, 0) + m
                if sorted(got.items()) != want:
                    problems.append(f"{text}: roots {sorted(got.items())} != {want} at {key}")
        expected = set(itertools.product([sympy.Integer(0), sympy.Integer(1)], repeat=root.depth))
        if covered != expected:
            problems.append(f"{text}: leaves cover {sorted(covered)}")
    out, err = io.StringIO(), io.StringIO()
    main(["factor", "--tower", "a:a^2-a", "X^2-a*X"], out, err)
    if out.getvalue().splitlines() != ["roots over Q [a != 0]: 0, 1", "roots over Q [a = 0]: 0 (multiplicity 2)"]:
        problems.append("cli rendering")
    elapsed = time.perf_counter() - start
    assert report(7, f"zero/invertible tags and roots match brute force on {len(CRITERION_7_INPUTS)} inputs",
                  not problems, elapsed, detail="; ".join(problems))


def test_splitting_minpolys_are_separable():
    # the tower generator above leans on these; keep them honest
    for cs in SPLITTING:
        p = to_sympy(qpoly(*cs)).as_expr()
        assert sympy.gcd(p, sympy.diff(p, X)) == 1
    assert QQ.dimension() == 1
