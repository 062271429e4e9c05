import pytest
from hypothesis import given
from hypothesis import strategies as st

from dynalg.errors import PreconditionError
from dynalg.split_value import sv_amalgamate, sv_const, sv_eq, sv_make, sv_restrict
from dynalg.tower import QQ, TRIVIAL, Hom, adjoin_root, is_invertible_split, split_by_idempotent
from helpers import qpoly, random_element, random_tower, rng_from

seeds = st.integers(min_value=0, max_value=10**6)


def idem():
    A = adjoin_root(QQ, qpoly(0, -1, 1), name="a")
    return A, A.gen("a")


def leaf_where(A, a, value):
    cover = split_by_idempotent(A, a)
    (b,) = [b for _, b in cover.nontrivial() if b.restrict(a) == value]
    return b


def test_constant():
    v = sv_make([(QQ.one(), 7)])
    assert v.is_constant() and v.constant() == 7 and str(v) == "7"


def test_equal_payloads_merge():
    A, a = idem()
    v = sv_make([(a, 3), (1 - a, 3)])
    assert v.is_constant() and v.constant() == 3


def test_two_terms():
    A, a = idem()
    v = sv_make([(a, 0), (1 - a, 1)])
    assert v.payloads() == [0, 1] and not v.is_constant()
    assert str(v) == "(a)·0 + (-a+1)·1"


def test_rejects_non_fundamental():
    A, a = idem()
    with pytest.raises(PreconditionError):
        sv_make([(a, 0)])
    with pytest.raises(PreconditionError):
        sv_make([(a, 0), (a, 1), (1 - 2 * a, 2)])
    with pytest.raises(PreconditionError):
        sv_make([(A.one(), 1.5)])


def test_restrict():
    A, a = idem()
    v = sv_make([(a, 0), (1 - a, 1)])
    b = leaf_where(A, a, 1)
    assert sv_restrict(v, b.restrict).constant() == 0
    b = leaf_where(A, a, 0)
    assert sv_restrict(v, b.restrict).constant() == 1
    c = sv_const(5, A)
    assert sv_restrict(c, b.restrict).constant() == 5
    to_zero = Hom(A, TRIVIAL, lambda x: TRIVIAL.zero())
    assert sv_restrict(v, to_zero).terms == ()


def test_restrict_to_a_equals_one_leaf_of_reversed_value():
    A, a = idem()
    v = sv_make([(a, 0), (1 - a, 1)])
    b = leaf_where(A, a, 1)
    # on the a = 1 leaf the term a*0 survives
    assert sv_restrict(v, b.restrict).constant() == 0
    w = sv_make([(1 - a, 0), (a, 1)])
    assert sv_restrict(w, b.restrict).constant() == 1


def test_eq_examples():
    A, a = idem()
    u = sv_make([(a, 1), (1 - a, 2)])
    assert sv_eq(u, u)
    cmp = sv_eq(u, sv_make([(a, 1), (1 - a, 3)]))
    assert not cmp and cmp.witness == (2, 3)
    assert ((1 - a) * (1 - a)) != 0
    assert sv_eq(u, sv_make([(1 - a, 2), (a, 1)]))


def test_amalgamate_constants():
    A, a = idem()
    cover = split_by_idempotent(A, a)
    values = [b.restrict(a).to_rational() for _, b in cover.nontrivial()]
    v = sv_amalgamate(cover, [int(x) for x in values])
    assert sv_eq(v, sv_make([(a, 1), (1 - a, 0)]))
    for (_, b), x in zip(cover.nontrivial(), values):
        assert sv_restrict(v, b.restrict).constant() == int(x)


def random_value(rng, T):
    x = random_element(rng, T)
    cover, _ = is_invertible_split(x)
    return sv_amalgamate(cover, [rng.randint(0, 2) for _ in cover.nontrivial()]), cover


@given(seeds)
def test_eq_is_an_equivalence(seed):
    rng = rng_from(seed)
    T = random_tower(rng, depth=rng.randint(1, 2), max_degree=3, split_bias=0.8)
    u, _ = random_value(rng, T)
    v, _ = random_value(rng, T)
    w, _ = random_value(rng, T)
    assert sv_eq(u, u)
    assert bool(sv_eq(u, v)) == bool(sv_eq(v, u))
    if sv_eq(u, v) and sv_eq(v, w):
        assert sv_eq(u, w)
    # canonical form makes equality structural
    assert bool(sv_eq(u, v)) == (u.terms == v.terms)


@given(seeds)
def test_amalgamate_then_restrict(seed):
    rng = rng_from(seed)
    T = random_tower(rng, depth=rng.randint(1, 2), max_degree=3, split_bias=0.8)
    x = random_element(rng, T)
    cover, _ = is_invertible_split(x)
    payloads = [rng.randint(0, 3) for _ in cover.nontrivial()]
    v = sv_amalgamate(cover, payloads)
    for (_, b), p in zip(cover.nontrivial(), payloads):
        assert sv_restrict(v, b.restrict).constant() == p


@given(seeds)
def test_restrict_along_composite(seed):
    rng = rng_from(seed)
    T = random_tower(rng, depth=rng.randint(1, 2), max_degree=3, split_bias=0.8)
    v, _ = random_value(rng, T)
    cover, _ = is_invertible_split(random_element(rng, T))
    for _, b in cover.nontrivial():
        sub, _ = is_invertible_split(random_element(rng, b.tower))
        for _, c in sub.nontrivial():
            step = sv_restrict(sv_restrict(v, b.restrict), c.restrict)
            assert step == sv_restrict(v, b.restrict.then(c.restrict))
