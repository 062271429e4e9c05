"""Random generators and independent oracles shared by the test modules."""

import random

import sympy
from gmpy2 import mpq

from dynalg.errors import PreconditionError
from dynalg.exact_arith import UniPoly
from dynalg.tower import QQ, adjoin_root

X = sympy.Symbol("X")

# minimal polynomials that make later computations split
SPLITTING = [[0, -1, 1], [-1, 0, 1], [0, -1, 0, 1], [4, 0, -5, 0, 1], [2, -3, 1], [0, 2, -3, 1]]


def qpoly(*coeffs):
    """UniPoly over Q from ascending coefficients (ints, mpq or 'p/q' strings)."""
    return UniPoly([mpq(c) for c in coeffs])


def to_sympy(f, var=X):
    return sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(_rats(f))]
                      or [0], var)


def _rats(f):
    return [c.to_rational() if hasattr(c, "to_rational") else mpq(c) for c in f.coeffs]


def from_sympy(p):
    cs = [mpq(int(c.p), int(c.q)) for c in reversed(sympy.Poly(p, X).all_coeffs())]
    return UniPoly(cs)


def random_element(rng, tower, spread=3):
    if tower.trivial:
        return tower.zero()
    coeffs = [mpq(rng.randint(-spread, spread), rng.choice([1, 1, 2, 3])) for _ in range(tower.dimension())]
    return tower.from_flat(coeffs)


def random_monic(rng, tower, degree, spread=3):
    cs = [random_element(rng, tower, spread) if tower.depth else tower.const(rng.randint(-spread, spread))
          for _ in range(degree)]
    return UniPoly(cs + [tower.one()])


def random_tower(rng, depth=None, max_degree=4, split_bias=0.4):
    """A tower of depth <= 3 and level degree <= max_degree, often with zero divisors."""
    depth = rng.randint(0, 3) if depth is None else depth
    tower = QQ
    for k in range(depth):
        for _ in range(50):
            if rng.random() < split_bias:
                cs = rng.choice(SPLITTING)
                p = UniPoly([tower.const(c) for c in cs])
                if p.degree() > max_degree:
                    continue
            else:
                p = random_monic(rng, tower, rng.randint(1, max_degree), spread=2)
            try:
                tower = adjoin_root(tower, p, name=f"a{k + 1}")
                break
            except PreconditionError:
                continue
    return tower


def rng_from(seed):
    return random.Random(seed)


XS, YS = sympy.symbols("X Y")


def random_curve_terms(rng, n=None, xdeg=3, spread=3):
    """Monic in Y of degree n <= 4, coefficients of X-degree <= xdeg, squarefree over Q(X)."""
    while True:
        deg = n or rng.randint(1, 4)
        terms = {(deg, 0): 1}
        for i in range(deg):
            for j in range(xdeg + 1):
                if rng.random() < 0.45:
                    c = mpq(rng.randint(-spread, spread), rng.choice([1, 1, 2]))
                    if c:
                        terms[(i, j)] = c
        if not any(i < deg and j == 0 for (i, j) in terms) and rng.random() < 0.7:
            continue  # mostly keep some constant-in-X term so the fiber at 0 is interesting
        G = curve_to_sympy(terms)
        if sympy.discriminant(G, YS) != 0:
            return terms


def curve_to_sympy(terms):
    return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * YS ** i * XS ** j
               for (i, j), c in ((k, mpq(v)) for k, v in terms.items()))
