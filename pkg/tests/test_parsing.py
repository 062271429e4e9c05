import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from dynalg.errors import ParseError, PreconditionError
from dynalg.parsing import (
    Add,
    Mul,
    Neg,
    Num,
    Pow,
    Sub,
    Var,
    evaluate,
    format_expr,
    parse,
    to_element,
    to_poly,
    to_terms,
    variables,
)
from dynalg.tower import QQ, adjoin_root
from helpers import qpoly


def test_basic_tree():
    assert parse("X^2-1") == Sub(Pow(Var("X"), 2), Num(mpq(1)))
    assert parse("-3/4") == Num(mpq(-3, 4))
    assert parse("2*(X+a)") == Mul(Num(mpq(2)), Add(Var("X"), Var("a")))


def test_division_by_constant():
    assert parse("X/2") == Mul(Var("X"), Num(mpq(1, 2)))


@pytest.mark.parametrize("text,column", [
    ("X^2+", 5),
    ("X**-1", 4),
    ("X^Y", 3),
    ("1.5*X", 1),
    ("X/Y", 3),
    ("X/0", 3),
    ("(X+1", 1),
    ("", 1),
])
def test_errors_carry_columns(text, column):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position + 1 == column
    assert f"column {column}" in str(info.value)


def test_variables_in_order():
    assert variables(parse("Y^2*X+b+X")) == ["Y", "X", "b"]


def test_evaluate_in_q():
    assert evaluate(parse("(1/2)^3+x"), {"x": mpq(1)}, mpq) == mpq(9, 8)


def test_unknown_variable():
    with pytest.raises(PreconditionError, match="unknown variable 'z'"):
        evaluate(parse("1+z"), {}, mpq)


def test_to_element_and_poly():
    A = adjoin_root(QQ, qpoly(-2, 0, 1), name="a")
    assert to_element("(a+1)*(a-1)", A) == 1
    f = to_poly("X^2-a*X", A)
    assert f.degree() == 2 and f.coeffs[1] == -A.gen("a")
    assert to_poly("X^3-3*X+2", QQ) == qpoly(2, -3, 0, 1).map(QQ.const)
    with pytest.raises(PreconditionError):
        to_poly("a+1", A, var="a")


def test_to_terms():
    assert to_terms("Y^4-3*Y^2+X*Y+X^2", ["Y", "X"]) == {
        (4, 0): 1, (2, 0): -3, (1, 1): 1, (0, 2): 1}
    assert to_terms("(X+Y)^2-X^2-Y^2", ["Y", "X"]) == {(1, 1): 2}


def test_minimal_parentheses():
    assert format_expr(parse("(X+1)*(X-1)")) == "(X+1)*(X-1)"
    assert format_expr(parse("X-(Y-1)")) == "X-(Y-1)"
    assert format_expr(parse("(-X)^2")) == "(-X)^2"
    assert format_expr(parse("2*X^3")) == "2*X^3"


names = st.sampled_from(["X", "Y", "a", "b"])
nums = st.fractions(max_denominator=9, min_value=-9, max_value=9).map(lambda f: Num(mpq(f.numerator, f.denominator)))
exprs = st.recursive(
    st.one_of(nums, names.map(Var)),
    lambda kids: st.one_of(
        st.builds(Add, kids, kids),
        st.builds(Sub, kids, kids),
        st.builds(Mul, kids, kids),
        st.builds(Neg, kids.filter(lambda e: not isinstance(e, Num))),
        st.builds(Pow, kids, st.integers(min_value=0, max_value=3)),
    ),
    max_leaves=8,
)


@given(exprs)
def test_print_parse_round_trip(e):
    text = format_expr(e)
    again = parse(text)
    assert format_expr(again) == text
    # the reparsed tree denotes the same polynomial
    assert to_terms(again, ["X", "Y", "a", "b"]) == to_terms(e, ["X", "Y", "a", "b"])


@given(exprs)
def test_parse_is_a_fixed_point_after_one_round(e):
    once = parse(format_expr(e))
    assert parse(format_expr(once)) == once
