from __future__ import annotations

import numpy as np
import pytest

from evoforms.casestudies import FlowSpec, HamiltonianSpec, gasdyn_relation, hamiltonian_check, thermo_ideal_gas
from evoforms.errors import ConfigurationError, Singularity
from evoforms.expr import Domain, parse_expr
from evoforms.forms import Chart, DForm, exterior_derivative, parse_form
from evoforms.numerics import (
    FLAG_THRESHOLD,
    GridSampler,
    fd_check,
    observed_order,
    parameter_bindings,
    sample_form,
)

XY = Chart(["x", "y"])


def unit_grid(points=3, h=1e-3):
    return GridSampler(XY, ((0.0, 1.0), (0.0, 1.0)), points, h)


def test_sample_linear_field():
    s = sample_form(parse_form("x*dy", XY), unit_grid())
    arr = s.values[(1,)]
    assert arr.shape == (3, 3)
    assert np.allclose(arr[:, 0], [0, 0.5, 1])
    assert np.allclose(s.values[(0,)], 0)


def test_sample_constant_and_determinism():
    w = parse_form("2*dx + 3*dy", XY)
    a = sample_form(w, unit_grid(4))
    b = sample_form(w, unit_grid(4))
    assert np.all(a.values[(0,)] == 2) and np.all(a.values[(1,)] == 3)
    for k in a.values:
        assert np.array_equal(a.values[k], b.values[k])


def test_sample_singularity():
    with pytest.raises(Singularity):
        sample_form(parse_form("1/x*dy", XY), unit_grid())


def test_unbound_symbols_rejected():
    with pytest.raises(ConfigurationError):
        sample_form(parse_form("a*dx", XY), unit_grid())


def test_grid_needs_three_points_and_clearance():
    with pytest.raises(ConfigurationError):
        GridSampler(XY, ((0, 1), (0, 1)), points=2)
    dom = Domain.make({"x": (-1, 1), "y": (-1, 1)}, coords=("x", "y"), exclude=[(0, 0)])
    with pytest.raises(ConfigurationError):
        GridSampler.from_domain(XY, dom, points=5)


def test_polynomial_form_is_exact_to_rounding():
    w = parse_form("x^2*y*dx + x*y^2*dy", XY)
    assert fd_check(w, GridSampler(XY, ((0.5, 2), (0.5, 2)), 6)).max_rel_err <= 1e-6


def test_trigonometric_form():
    w = parse_form("sin(x*y)*dx + cos(x + y^2)*dy", XY)
    assert fd_check(w, GridSampler(XY, ((0.5, 2), (0.5, 2)), 6)).max_rel_err <= 1e-5


def test_mutation_is_flagged():
    w = parse_form("x^2*y*dx + sin(x)*y*dy", XY)
    wrong = -exterior_derivative(w)
    rep = fd_check(w, GridSampler(XY, ((0.5, 2), (0.5, 2)), 5), claimed=wrong)
    assert rep.flagged and rep.max_rel_err >= 1e-2
    assert rep.threshold == FLAG_THRESHOLD


def test_order_two_convergence():
    w = parse_form("exp(x)*sin(y)*dx + x^3*cos(y)*dy", XY)
    out = observed_order(w, GridSampler(XY, ((0.5, 1.5), (0.5, 1.5)), 5, h=1e-2), halvings=2)
    assert out["errors"][0] > out["errors"][1] > out["errors"][2]
    assert out["order"] >= 1.95


def test_parameter_bindings_are_deterministic():
    assert parameter_bindings({"a", "b"}, seed=3) == parameter_bindings({"b", "a"}, seed=3)
    assert parameter_bindings({"a"}, seed=3) != parameter_bindings({"a"}, seed=4)


@pytest.mark.parametrize("make", [
    lambda: thermo_ideal_gas().objects["omega"],
    lambda: gasdyn_relation(FlowSpec(coords=("x", "y"), U=(0, parse_expr("x*t")),
                                     transport=parse_expr("x*y"))).objects["omega"],
    lambda: hamiltonian_check(HamiltonianSpec()).objects["theta"],
])
def test_case_study_forms(make):
    w = make()
    names = w.free_symbols() - set(w.chart.coords)
    sampler = GridSampler.from_domain(w.chart, Domain.make())
    rep = fd_check(w, sampler, parameter_bindings(names))
    assert rep.max_rel_err <= 1e-5 and not rep.flagged
