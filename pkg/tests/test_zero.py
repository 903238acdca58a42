from __future__ import annotations

from fractions import Fraction

import pytest

from evoforms.errors import ConfigurationError
from evoforms.expr import (
    Domain,
    ZeroStatus,
    cancel,
    divide_exact,
    equals_zero,
    parse_expr,
    simplify,
    to_string,
)


@pytest.mark.parametrize("text", [
    "x - x",
    "sin(x)^2 + cos(x)^2 - 1",
    "1/(x + y) - 1/(x + y)",
    "(x^2 - y^2)/(x - y) - x - y",
    "x/(x^2 + y^2) + y^2/(x*(x^2 + y^2)) - 1/x",
])
def test_proved_zero(text):
    r = equals_zero(parse_expr(text))
    assert r.status is ZeroStatus.PROVED_ZERO
    assert r.is_zero and r.proved


def test_nonzero_has_a_witness():
    r = equals_zero(parse_expr("x - y"))
    assert r.status is ZeroStatus.NONZERO
    assert r.witness is not None
    assert abs(r.value) > 1e-9


def test_numeric_zero_for_identities_outside_the_rewrites():
    # sin(2x) is not rewritten into 2 sin x cos x by the engine
    r = equals_zero(parse_expr("sin(2*x) - 2*sin(x)*cos(x)"))
    assert r.status is ZeroStatus.NUMERICALLY_ZERO


def test_domain_without_default_requires_intervals():
    dom = Domain.make({"x": (1, 2)}, default=None)
    with pytest.raises(ConfigurationError):
        equals_zero(parse_expr("x - y + 1"), dom)


def test_domain_sampling_is_deterministic():
    e = parse_expr("x^3 - y")
    a = equals_zero(e, Domain.make(seed=4))
    b = equals_zero(e, Domain.make(seed=4))
    assert a.witness == b.witness


def test_exact_division_and_cancel():
    q = divide_exact(parse_expr("x^3 - y^3"), parse_expr("x - y"))
    assert q == parse_expr("x^2 + x*y + y^2")
    assert divide_exact(parse_expr("x^2 + 1"), parse_expr("x - 1")) is None
    assert to_string(cancel(parse_expr("(x^2 - 1)/(x + 1)"))) == "x - 1"


def test_simplify_returns_canonical_zero():
    assert simplify(parse_expr("sin(x)^2 + cos(x)^2 - 1")).is_zero
    assert simplify(parse_expr("R*T/V")) == parse_expr("R*T/V")


def test_excluded_point_inside_box():
    dom = Domain.make({"x": (-1, 1), "y": (-1, 1)}, coords=("x", "y"), exclude=[(0, 0)])
    assert dom.excluded_inside() == [(Fraction(0), Fraction(0))]
