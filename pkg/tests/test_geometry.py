from __future__ import annotations

import random

import pytest
import sympy as sp

from formgen import random_connection_components
from oracles import christoffel, riemann, same
from evoforms.errors import ConfigurationError, DegenerateMetric
from evoforms.expr import equals_zero, parse_expr, to_string
from evoforms.forms import Chart, DForm, commutator_with_connection
from evoforms.geometry import Connection, Metric, curvature, levi_civita, metric_closure_report, torsion

SPHERE = Chart(["theta", "phi"])
TH, PH = sp.symbols("theta phi", positive=True)


@pytest.fixture(scope="module")
def sphere():
    g = Metric.diag(SPHERE, [1, parse_expr("sin(theta)^2")])
    return levi_civita(g)


def test_sphere_frozen_values(sphere):
    assert to_string(sphere.component(0, 1, 1)) == "-cos(theta)*sin(theta)"
    assert to_string(sphere.component(1, 0, 1)) == "cos(theta)/sin(theta)"
    R = curvature(sphere)
    assert to_string(R.component(0, 1, 0, 1)) == "sin(theta)^2"


def test_sphere_against_brute_force_oracle(sphere):
    xs = [TH, PH]
    g = sp.diag(1, sp.sin(TH) ** 2)
    gamma = christoffel(g, xs)
    for key, v in gamma.items():
        assert same(sphere.component(*key), v), key
    R = curvature(sphere)
    for key, v in riemann(gamma, xs).items():
        assert same(R.component(*key), v), key


def test_polar_metric_is_flat():
    polar = Chart(["r", "theta"])
    g = levi_civita(Metric.diag(polar, [1, parse_expr("r^2")]))
    assert to_string(g.component(0, 1, 1)) == "-r"
    R = curvature(g)
    assert not R.components
    rep = metric_closure_report(g)
    assert rep.classification == "closed metric forms"


def test_constant_metric_flat_and_symmetric():
    chart = Chart(["x", "y", "z"])
    g = levi_civita(Metric(chart, [[2, 1, 0], [1, 3, 0], [0, 0, 1]]))
    assert not g.components
    assert all(v.is_zero for v in torsion(g).values())


def test_torsion_is_antisymmetric_part():
    chart = Chart(["a", "b"])
    g = Connection(chart, {("a", "b", "a"): 1})
    t = torsion(g)
    assert t[(0, 1, 0)] == parse_expr("1")
    assert t[(0, 0, 1)] == parse_expr("-1")
    rep = metric_closure_report(g)
    assert rep.degree1["status"] == "nonzero"
    assert rep.degree2["status"] == "not-computed"
    assert rep.classification == "deforming manifold (torsion)"


def test_sphere_report_is_curved(sphere):
    rep = metric_closure_report(sphere)
    assert rep.degree1["status"] == "zero"
    assert rep.degree3["status"] == "nonzero"
    assert rep.classification == "deforming manifold (curved)"


def test_metric_must_be_symmetric():
    with pytest.raises(ConfigurationError):
        Metric(Chart(["x", "y"]), [[1, 2], [3, 1]])


def test_degenerate_metric_detected():
    with pytest.raises(DegenerateMetric):
        Metric.diag(Chart(["x", "y"]), [parse_expr("x - x"), 1]).check_nondegenerate()


@pytest.mark.parametrize("seed", range(5))
def test_levi_civita_matches_oracle_on_random_diagonal_metrics(seed):
    rng = random.Random(seed)
    chart = Chart(["x", "y"])
    a = rng.randint(1, 3)
    b = rng.randint(1, 3)
    entries = [f"{a} + x^2", f"{b} + x*y + y^2"]
    g = levi_civita(Metric.diag(chart, [parse_expr(e) for e in entries]))
    X, Y = sp.symbols("x y", positive=True)
    oracle = christoffel(sp.diag(*[sp.sympify(e.replace("^", "**"), locals={"x": X, "y": Y}) for e in entries]),
                         [X, Y])
    for key, v in oracle.items():
        assert same(g.component(*key), v), key


@pytest.mark.parametrize("seed", range(5))
def test_symmetric_connection_has_no_commutator_part(seed):
    rng = random.Random(seed)
    chart = Chart(["x", "y", "z"])
    conn = Connection(chart, random_connection_components(rng, chart, symmetric=True))
    w = DForm.one_form(chart, [parse_expr("x*y"), parse_expr("z"), parse_expr("x^2")])
    k = commutator_with_connection(w, conn)
    for key in chart.keys(2):
        assert equals_zero(k.connection(key)).proved
