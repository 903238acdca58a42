"""Hamiltonian systems through the form -H dt + p_j dq_j on (t, q_j, p_j).

The Hamiltonian field X = d/dt + H_p d/dq - H_q d/dp annihilates d(theta);
i_X d(theta) = 0 is the form-level content of Hamilton's equations.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigurationError
from ..expr import ZERO, Expr, as_expr, diff, equals_zero
from ..forms import Chart, DForm, VectorField, exterior_derivative, interior_product
from .common import CaseReport, spec_expr, spec_names, split_tuple
from ..expr import parse_expr


@dataclass(frozen=True)
class HamiltonianSpec:
    H: object = "(p^2 + q^2)/2"
    coords: tuple = ("t", "q", "p")
    field: tuple | None = None  # optional override for X, chart order

    @staticmethod
    def from_spec(spec: dict) -> "HamiltonianSpec":
        field = None
        if "field" in spec:
            text, line, _ = spec["field"]
            field = tuple(parse_expr(p, line) for p in split_tuple(text))
        return HamiltonianSpec(spec_expr(spec, "H"), tuple(spec_names(spec, "coordinates", "(t, q, p)")), field)


def phase_chart(coords) -> tuple:
    coords = list(coords)
    if len(coords) < 3 or len(coords) % 2 == 0:
        raise ConfigurationError("a phase chart is (t, q_1..q_m, p_1..p_m): an odd number of at least 3 variables")
    m = (len(coords) - 1) // 2
    return Chart(coords), coords[0], coords[1:1 + m], coords[1 + m:]


def poincare_form(chart: Chart, H: Expr, t: str, qs, ps) -> DForm:
    theta = DForm.basis(chart, t) * (-H)
    for q, p in zip(qs, ps):
        theta = theta + DForm.basis(chart, q) * as_expr(p)
    return theta


def hamiltonian_field(chart: Chart, H: Expr, t: str, qs, ps) -> VectorField:
    comps = [ZERO] * chart.dim
    comps[chart.index(t)] = as_expr(1)
    for q, p in zip(qs, ps):
        comps[chart.index(q)] = diff(H, p)
        comps[chart.index(p)] = -diff(H, q)
    return VectorField(chart, comps)


def hamiltonian_check(spec: HamiltonianSpec = HamiltonianSpec()) -> CaseReport:
    rep = CaseReport("hamiltonian")
    chart, t, qs, ps = phase_chart(spec.coords)
    H = as_expr(spec.H)
    theta = poincare_form(chart, H, t, qs, ps)
    dtheta = exterior_derivative(theta)
    if spec.field is not None:
        if len(spec.field) != chart.dim:
            raise ConfigurationError(f"the field needs {chart.dim} components")
        X = VectorField(chart, spec.field)
        rep.warnings.append("vector field overridden; not the Hamiltonian field of H")
    else:
        X = hamiltonian_field(chart, H, t, qs, ps)
    contraction = interior_product(X, dtheta)
    rep.expr("H", H)
    rep.expr("theta", theta)
    rep.expr("d(theta)", dtheta)
    rep.expr("X", X)
    rep.expr("i_X(d(theta))", contraction)
    statuses = [equals_zero(v).status.value for v in contraction.coeffs.values()]
    if all(s == "proved_zero" for s in statuses):
        status = "proved_zero"
    elif "nonzero" in statuses:
        status = "nonzero"
    else:
        status = "numerically_zero"
    rep.verdict("i_X(d(theta))", status, hamiltonian="yes" if status != "nonzero" else "no")
    rep.objects.update(chart=chart, theta=theta, dtheta=dtheta, field=X, contraction=contraction)
    return rep
