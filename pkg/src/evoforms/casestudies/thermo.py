"""Ideal-gas thermodynamics: dE + p dV, its integrating factor and the entropy."""
from __future__ import annotations

import time
from dataclasses import dataclass

from ..expr import Expr, as_expr, equals_zero
from ..forms import Chart, DForm, exterior_derivative, potential
from ..relations import (
    build_relation,
    classify_relation,
    degree_descent,
    find_integrating_factor,
    frobenius_test,
)
from .common import CaseReport, spec_expr, spec_str


@dataclass(frozen=True)
class ThermoSpec:
    c_v: object = "c_v"
    R: object = "R"
    T: str = "T"
    V: str = "V"
    base: tuple = (1, 1)

    @staticmethod
    def from_spec(spec: dict) -> "ThermoSpec":
        return ThermoSpec(spec_expr(spec, "c_v", "c_v"), spec_expr(spec, "R", "R"),
                          spec_str(spec, "T", "T"), spec_str(spec, "V", "V"))


def thermo_ideal_gas(spec: ThermoSpec = ThermoSpec()) -> CaseReport:
    start = time.perf_counter()
    rep = CaseReport("thermo")
    chart = Chart([spec.T, spec.V])
    T, V = chart.symbols()
    c_v, R = as_expr(spec.c_v), as_expr(spec.R)
    energy = DForm.scalar(chart, c_v * T)
    pressure = R * T / V
    omega = exterior_derivative(energy) + DForm.basis(chart, spec.V) * pressure
    rep.expr("E", energy)
    rep.expr("p", pressure)
    rep.expr("omega", omega)

    rel = build_relation(energy, omega, name="first_law")
    cls = classify_relation(rel)
    rep.verdict("relation", rel.status)
    for comp in cls.components:
        rep.expr(comp.label, comp.total)
        rep.verdict(comp.label, comp.status.value, attribution=comp.attribution)

    frob = frobenius_test(omega)
    rep.verdict("frobenius", frob.verdict, note=frob.note or None)

    mu = find_integrating_factor(omega, [spec.T, spec.V])
    rep.objects.update(chart=chart, omega=omega, relation=rel, classification=cls, mu=mu)
    if mu is None:
        rep.verdict("integrating_factor", "not_found")
        return rep
    rep.expr("integrating_factor", mu)
    scaled = omega * mu
    closed = all(equals_zero(v).proved for v in exterior_derivative(scaled).coeffs.values())
    rep.verdict("integrating_factor", "found", closure="proved_zero" if closed else "numerically_zero")

    entropy = potential(scaled, spec.base)
    rep.expr("entropy", entropy)
    rep.expr("entropy_gauge", "(" + ", ".join(str(b) for b in spec.base) + ")")
    diffs = exterior_derivative(entropy) - scaled
    statuses = [equals_zero(v).status.value for v in diffs.coeffs.values()]
    rep.verdict("dS - mu*omega", "proved_zero" if all(s == "proved_zero" for s in statuses) else
                ("nonzero" if "nonzero" in statuses else "numerically_zero"))

    ident = build_relation(entropy, scaled, name="entropy_relation")
    rep.verdict("entropy_relation", ident.status)
    desc = degree_descent(ident, spec.base)
    rep.verdict("descent", "k=0" if desc.reached_zero else "halted", final_degree=desc.final_degree)
    rep.objects.update(entropy=entropy, scaled=scaled, identical_relation=ident, descent=desc)
    rep.objects["elapsed"] = time.perf_counter() - start
    return rep
