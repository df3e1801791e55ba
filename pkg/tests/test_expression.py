import pytest
from hypothesis import given, strategies as st

from birweyl.algebra import RationalFunction
from birweyl.expression import ExpressionError, parse_expression, tokenize
from birweyl.poisson import preset
from strategies import TABLE, nonzero_polynomials, polynomials

A2 = preset("A2")


def parse(text):
    return parse_expression(text, A2.table)


def test_fixture_values_parse():
    f = parse("x*y - b*z")
    assert f.den.is_constant() and f.to_text() == "x*y - b*z"
    g = parse("y + a*z/x")
    assert g == RationalFunction.var(A2.table, "y") + parse("a*z") / parse("x")


@pytest.mark.parametrize(
    "text, code, pos",
    [
        ("x*(", "SYNTAX_ERROR", 3),
        ("x +", "SYNTAX_ERROR", 3),
        ("x y", "SYNTAX_ERROR", 2),
        ("x $ y", "SYNTAX_ERROR", 2),
        ("(x", "SYNTAX_ERROR", 2),
        ("x^y", "SYNTAX_ERROR", 2),
        ("1/0", "SYNTAX_ERROR", 1),
        ("x + q", "UNKNOWN_VARIABLE", 4),
    ],
)
def test_errors_carry_position(text, code, pos):
    with pytest.raises(ExpressionError) as e:
        parse(text)
    assert (e.value.code, e.value.position) == (code, pos)


def test_precedence():
    assert parse("-x^2") == -(parse("x") ** 2)
    assert parse("x + y*z") == parse("x + (y*z)")
    assert parse("x/y*z") == parse("(x/y)*z")


def test_rational_literals_and_negative_powers():
    assert parse("3/4*x") == parse("x") * parse("3") / parse("4")
    assert parse("x^-2") == parse("1/x^2")
    assert parse("x^0") == parse("1")


def test_tokenizer_positions():
    toks = tokenize(" x1*  y")
    assert [(t.kind, t.text, t.pos) for t in toks] == [
        ("NAME", "x1", 1), ("OP", "*", 3), ("NAME", "y", 6), ("END", "", 7)]


@given(polynomials(), nonzero_polynomials(max_terms=2))
def test_print_parse_round_trip(p, q):
    f = RationalFunction(p, q)
    g = parse_expression(f.to_text(), TABLE)
    assert g == f
    assert g.to_text() == f.to_text()
