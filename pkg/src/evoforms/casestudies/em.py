"""Charged-particle (Poynting) relation in the adapted frame (t, l1).

With S the Poynting flux along l1, I the energy density and Q_e, Q_i the
source terms, the balance equations are used as written:

    dS/dl1 = -(1/c) dI/dt + Q_e / c
    dS/dt  = -c dI/dl1 + c Q_i

and assembled into the relation dS = omega with
omega = (-c dI/dl1 + c Q_i) dt + (-(1/c) dI/dt + Q_e/c) dl1.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..expr import ZERO, Expr, as_expr, cancel, diff, equals_zero, func, simplify
from ..forms import Chart, DForm, exterior_derivative, pullback
from ..relations import build_relation, classify_relation, degenerate_loci, integrating_direction
from .common import CaseReport, spec_expr, spec_str, spec_vector


@dataclass(frozen=True)
class EMSpec:
    c: object = "c"
    Q_e: object = 0
    Q_i: object = 0
    preset: str = "vacuum"  # vacuum | generic | fields
    S: object = None
    I: object = None
    E: tuple | None = None
    H: tuple | None = None
    t: str = "t"
    l1: str = "l1"

    @staticmethod
    def from_spec(spec: dict) -> "EMSpec":
        preset = spec_str(spec, "preset", "vacuum")
        E = tuple(spec_vector(spec, "E", 3)) if "E" in spec else None
        H = tuple(spec_vector(spec, "H", 3)) if "H" in spec else None
        return EMSpec(spec_expr(spec, "c", "c"), spec_expr(spec, "Q_e", "0"), spec_expr(spec, "Q_i", "0"),
                      preset, spec_expr(spec, "S") if "S" in spec else None,
                      spec_expr(spec, "I") if "I" in spec else None, E, H,
                      spec_str(spec, "t", "t"), spec_str(spec, "l1", "l1"))


def _profiles(spec: EMSpec, chart: Chart) -> tuple:
    t, l1 = chart.symbols()
    c = as_expr(spec.c)
    phase = l1 - c * t
    if spec.E is not None or spec.H is not None:
        E = [as_expr(v) for v in (spec.E or (0, 0, 0))]
        H = [as_expr(v) for v in (spec.H or (0, 0, 0))]
        S = E[1] * H[2] - E[2] * H[1]  # component of [E x H] along l1
        I = (sum((e * e for e in E), ZERO) + sum((h * h for h in H), ZERO)) / c
        return S, I
    S = as_expr(spec.S) if spec.S is not None else func("sigma", phase)
    if spec.I is not None:
        I = as_expr(spec.I)
    elif spec.preset == "generic":
        I = func("I", t, l1)
    else:
        I = func("iota", phase)
    return S, I


def poynting_omega(chart: Chart, I: Expr, c: Expr, Q_e: Expr, Q_i: Expr) -> DForm:
    t, l1 = chart.coords
    w_t = -c * diff(I, l1) + c * Q_i
    w_l1 = -diff(I, t) / c + Q_e / c
    return DForm.one_form(chart, [w_t, w_l1])


def source_residual(omega: DForm, I: Expr, ratio: Expr) -> DForm:
    """Move each component of omega onto the other basis element along dl1 = ratio dt, then add dI."""
    chart = omega.chart
    moved = DForm.one_form(chart, [omega[1] * ratio, omega[0] / ratio])
    total = moved + exterior_derivative(DForm.scalar(chart, I))
    return total.map(simplify)


def em_poynting(spec: EMSpec = EMSpec()) -> CaseReport:
    rep = CaseReport("em")
    chart = Chart([spec.t, spec.l1])
    c = as_expr(spec.c)
    Q_e, Q_i = as_expr(spec.Q_e), as_expr(spec.Q_i)
    S, I = _profiles(spec, chart)
    omega = poynting_omega(chart, I, c, Q_e, Q_i)
    psi = DForm.scalar(chart, S)
    rep.expr("S", S)
    rep.expr("I", I)
    rep.expr("omega", omega)
    rel = build_relation(psi, omega, name="poynting")
    cls = classify_relation(rel)
    rep.verdict("relation", rel.status)
    for comp in cls.components:
        rep.expr(comp.label, comp.total)
        rep.verdict(comp.label, comp.status.value)
    rep.objects.update(chart=chart, omega=omega, relation=rel, classification=cls, S=S, I=I)

    direction = integrating_direction(rel)
    if direction is None:
        rep.verdict("integrating_direction", "undefined", note="d(psi)/d(l1) vanishes")
    else:
        ratio = direction.ratio
        rep.expr("direction_ratio", ratio)
        exact_c = (ratio - c).is_zero
        rep.verdict("integrating_direction", "constant" if direction.family is not None else "variable",
                    equals_c="exact" if exact_c else "no")
        if direction.family is not None:
            rep.expr("characteristic", direction.family)
            rep.verdict("restriction_to_characteristic", "identical" if direction.verified else "nonidentical")
            rep.expr("dS_on_characteristic", direction.dpsi_pullback)
        rep.objects["direction"] = direction

    if rel.status == "nonidentical":
        loci = degenerate_loci(rel)
        rep.objects["loci"] = loci
        rep.verdict("pseudostructure", "empty" if loci.empty else "found",
                    constraints=[str(k.expr) for k in loci.constraints])

    if not (Q_e.is_zero and Q_i.is_zero) and direction is not None and direction.family is not None:
        residual = source_residual(omega, I, direction.ratio)
        rep.expr("residual", residual)
        on_char = pullback(direction.family, residual)
        cond = simplify(on_char.coeffs.get((0,), ZERO))
        rep.expr("discrete_condition", f"{cond} = 0")
        zero = equals_zero(cond).is_zero
        rep.verdict("source_closure", "holds identically" if zero else "discrete",
                    note=None if zero else "closure only where the discrete condition is met")
        rep.objects.update(residual=residual, condition=cond)
    return rep
