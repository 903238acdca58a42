from __future__ import annotations

import random

import pytest

from formgen import CHARTS, random_field, random_form, random_map
from evoforms.errors import ChartMismatch, DegreeError
from evoforms.expr import ZERO, Expr, func, parse_expr, sym
from evoforms.forms import (
    Chart,
    DForm,
    ParamMap,
    VectorField,
    commutator_with_connection,
    exterior_derivative,
    interior_product,
    parse_form,
    pullback,
    wedge,
)
from evoforms.geometry import Connection

XY = Chart(["x", "y"])
XYZ = Chart(["x", "y", "z"])


def f(text, chart=XY, degree=None):
    return parse_form(text, chart, degree)


def test_basis_wedge_rules():
    dx, dy = DForm.basis(XY, "x"), DForm.basis(XY, "y")
    assert wedge(dx, dx).is_zero
    assert wedge(dx, dy) == -wedge(dy, dx)
    assert wedge(f("x*dy"), f("y*dx")) == f("-x*y*dx^dy")


def test_wedge_beyond_dimension_is_zero():
    top = f("dx^dy")
    out = wedge(top, f("dx"))
    assert out.is_zero and out.degree == 3


def test_chart_mismatch():
    with pytest.raises(ChartMismatch):
        wedge(f("dx"), parse_form("dz", XYZ))


def test_exterior_derivative_examples():
    assert exterior_derivative(f("x*dy")) == f("dx^dy")
    assert exterior_derivative(DForm.scalar(XY, parse_expr("x^2*y"))) == f("2*x*y*dx + x^2*dy")
    assert exterior_derivative(f("dx^dy")).is_zero


def test_keys_are_increasing_and_zero_free():
    w = DForm(XYZ, 2, {(1, 0): sym("x"), (0, 2): ZERO})
    assert w.coeffs == {(0, 1): -sym("x")}
    assert w[(1, 0)] == sym("x")


def test_interior_product_examples():
    assert interior_product(VectorField.coordinate(XY, "x"), f("dx^dy")) == f("dy")
    pq = Chart(["q", "p"])
    X = VectorField(pq, [sym("p"), -sym("q")])
    w = parse_form("dp^dq", pq)
    assert interior_product(X, w) == parse_form("-q*dq - p*dp", pq)
    assert interior_product(X, DForm.scalar(pq, sym("q"))).is_zero


def test_pullback_examples():
    y_only = Chart(["y"])
    phi = ParamMap(y_only, XY, [Expr.num(0), sym("y")])
    assert pullback(phi, f("x*y*dx")).is_zero
    wave = Chart(["t", "l1"])
    c, t = sym("c"), sym("t")
    psi = DForm.scalar(wave, func("S", sym("l1") - c * t))
    char = ParamMap(Chart(["t"]), wave, [t, c * t + sym("k")])
    assert pullback(char, exterior_derivative(psi)).is_zero


def test_pullback_dimension_mismatch():
    phi = ParamMap(Chart(["s"]), XYZ, [sym("s"), sym("s"), sym("s")])
    with pytest.raises(ChartMismatch):
        pullback(phi, f("dx"))


def test_commutator_flat_and_connection_parts():
    a, b = func("a", sym("x"), sym("y")), func("b", sym("x"), sym("y"))
    w = DForm.one_form(XY, [a, b])
    k = commutator_with_connection(w)
    assert k.flat((0, 1)) == parse_expr("b'[1,0](x, y) - a'[0,1](x, y)")
    assert k.connection((0, 1)).is_zero
    # G^x_{yx} - G^x_{xy} = c on sigma = x
    conn = Connection(XY, {("x", "y", "x"): sym("c")})
    k = commutator_with_connection(f("a0*dx"), conn)
    assert k.total((0, 1)) == sym("c") * sym("a0")
    assert k.flat((0, 1)).is_zero


def test_commutator_rejects_scalars():
    with pytest.raises(DegreeError):
        commutator_with_connection(DForm.scalar(XY, sym("x")))


def test_printing_uses_dsl_syntax():
    w = f("c_v*dT + (R*T/V)*dV", Chart(["T", "V"]))
    assert str(w) == "c_v*dT + (R*T/V)*dV"
    assert str(DForm.zero(XY, 1)) == "0"


@pytest.mark.parametrize("seed", range(6))
def test_interior_product_squares_to_zero(seed):
    rng = random.Random(seed)
    chart = CHARTS[2 + seed % 3]
    X = random_field(rng, chart)
    for p in range(1, chart.dim + 1):
        w = random_form(rng, chart, p)
        assert interior_product(X, interior_product(X, w)).is_zero


@pytest.mark.parametrize("seed", range(6))
def test_pullback_is_multiplicative(seed):
    rng = random.Random(100 + seed)
    target = CHARTS[3]
    phi = random_map(rng, CHARTS[2], target)
    a, b = random_form(rng, target, 1), random_form(rng, target, 1)
    assert pullback(phi, wedge(a, b)) == wedge(pullback(phi, a), pullback(phi, b))
