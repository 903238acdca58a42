"""Maxwell's equations as closure of a field 2-form on (x0, x, y, z), x0 = c*t.

    theta = sum_i E_i dx^i ^ dx0 + H_x dy^dz + H_y dz^dx + H_z dx^dy

d(theta) = 0 carries the homogeneous pair; closure of the metric dual carries
the source-free inhomogeneous pair.  The dual is reported for both the
Euclidean and the Minkowski metric because only the latter is physical.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..expr import ZERO, as_expr, equals_zero
from ..forms import Chart, DForm, exterior_derivative, hodge_star
from ..geometry import Metric
from .common import CaseReport, spec_names, spec_vector


@dataclass(frozen=True)
class MaxwellSpec:
    E: tuple = (0, 0, 0)
    H: tuple = (0, 0, 0)
    coords: tuple = ("x0", "x", "y", "z")

    @staticmethod
    def from_spec(spec: dict) -> "MaxwellSpec":
        return MaxwellSpec(tuple(spec_vector(spec, "E", 3, "(0, 0, 0)")),
                           tuple(spec_vector(spec, "H", 3, "(0, 0, 0)")),
                           tuple(spec_names(spec, "coordinates", "(x0, x, y, z)")))


def field_form(chart: Chart, E, H) -> DForm:
    x0, x, y, z = chart.coords
    E = [as_expr(v) for v in E]
    H = [as_expr(v) for v in H]
    theta = DForm.zero(chart, 2)
    for e, xi in zip(E, (x, y, z)):
        theta = theta + DForm.basis(chart, xi, x0) * e
    theta = theta + DForm.basis(chart, y, z) * H[0]
    theta = theta + DForm.basis(chart, z, x) * H[1]
    theta = theta + DForm.basis(chart, x, y) * H[2]
    return theta


def _closure(w: DForm) -> tuple:
    dw = exterior_derivative(w)
    statuses = [equals_zero(v).status.value for v in dw.coeffs.values()]
    if not statuses or all(s == "proved_zero" for s in statuses):
        status = "proved_zero"
    elif "nonzero" in statuses:
        status = "nonzero"
    else:
        status = "numerically_zero"
    return dw, status


def maxwell_check(spec: MaxwellSpec = MaxwellSpec()) -> CaseReport:
    rep = CaseReport("maxwell")
    if len(spec.coords) != 4:
        from ..errors import ConfigurationError
        raise ConfigurationError("the field chart needs exactly four coordinates (x0, x, y, z)")
    chart = Chart(spec.coords)
    theta = field_form(chart, spec.E, spec.H)
    rep.expr("theta", theta)
    d_theta, status = _closure(theta)
    rep.expr("d(theta)", d_theta)
    rep.verdict("d(theta)", status, closed="yes" if status != "nonzero" else "no")
    metrics = {
        "euclidean": Metric.identity(chart),
        "minkowski": Metric.diag(chart, [-1, 1, 1, 1]),
    }
    duals = {}
    rep.warnings.append("the dual form is taken as the metric Hodge star; both signatures are reported")
    for label, g in metrics.items():
        dual = hodge_star(theta, g)
        d_dual, st = _closure(dual)
        rep.expr(f"*theta[{label}]", dual)
        rep.expr(f"d(*theta)[{label}]", d_dual)
        rep.verdict(f"d(*theta)[{label}]", st, closed="yes" if st != "nonzero" else "no")
        duals[label] = dual
    rep.objects.update(chart=chart, theta=theta, d_theta=d_theta, duals=duals)
    return rep
