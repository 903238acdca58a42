from __future__ import annotations

import pytest

from evoforms.errors import DegreeError, ParseError
from evoforms.expr import parse_expr, sym, to_string
from evoforms.forms import Chart, parse_form

x, y = sym("x"), sym("y")


@pytest.mark.parametrize("text,expected", [
    ("x + y*2", "x + 2*y"),
    ("c_v*T", "T*c_v"),
    ("(R*T)/V", "R*T/V"),
    ("-x^2", "-x^2"),
    ("(x + y)^2", "x^2 + 2*x*y + y^2"),
    ("x^(1/2)*x^(1/2)", "x"),
    ("2^-1*x", "x/2"),
    ("f'(x) + g''(y)", "f'(x) + g''(y)"),
    ("h'[1,0](x, y)", "h'[1,0](x, y)"),
    ("  x\t*  y ", "x*y"),
])
def test_parse_and_print(text, expected):
    assert to_string(parse_expr(text)) == expected


def test_unary_minus_binds_looser_than_power():
    assert parse_expr("-x^2") == -(x ** 2)
    assert parse_expr("(-x)^2") == x ** 2


@pytest.mark.parametrize("text,line,col,fragment", [
    ("(x + y", 1, 7, "unbalanced parenthesis"),
    ("(R*T/V", 1, 7, "unbalanced parenthesis"),
    ("x + y)", 1, 6, "unbalanced parenthesis"),
    ("x % y", 1, 3, "unknown operator '%'"),
    ("x +", 1, 4, ""),
])
def test_errors_carry_position(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.line == line
    assert info.value.col == col
    assert fragment in str(info.value)


def test_error_offsets_follow_the_caller():
    with pytest.raises(ParseError) as info:
        parse_expr("x $ 1", line=7, col=10)
    assert (info.value.line, info.value.col) == (7, 12)


def test_forms_parse_with_basis_and_wedge():
    chart = Chart(["x", "y", "z"])
    w = parse_form("2*x*y*dx + x^2*dy", chart, 1)
    assert str(w) == "2*x*y*dx + x^2*dy"
    v = parse_form("dx^dy + z*dy∧dz", chart)
    assert v.degree == 2
    assert str(v) == "dx^dy + z*dy^dz"
    assert parse_form("dy*dx", chart) == -parse_form("dx^dy", chart)


def test_form_degree_checks():
    chart = Chart(["x", "y"])
    with pytest.raises((DegreeError, ParseError)):
        parse_form("dx + dx^dy", chart)
    with pytest.raises((DegreeError, ParseError)):
        parse_form("x*dx", chart, 2)


def test_form_round_trip_on_printed_output():
    chart = Chart(["T", "V"])
    w = parse_form("c_v*dT + (R*T/V)*dV", chart, 1)
    assert parse_form(str(w), chart, 1) == w
