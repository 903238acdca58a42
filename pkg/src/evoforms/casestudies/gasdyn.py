"""Gas-dynamic evolutionary relation ds = A_mu dxi^mu.

The entropy gradient along the normal coordinates is

    A_nu = (grad h0 + U x rot U - F + dU/dt)_nu / T,

while A_1 along the trajectory coordinate is zero for an ideal gas or the
supplied transport term otherwise.  Each nonzero commutator component is
attributed to the source terms whose own commutator contribution is nonzero.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ConfigurationError
from ..expr import ZERO, Expr, as_expr, diff, equals_zero, simplify
from ..forms import Chart, DForm, commutator_with_connection
from ..relations import build_relation, classify_relation
from .common import CaseReport, spec_expr, spec_names, spec_str, spec_vector

SOURCES = ("transport", "unsteadiness", "rotationality", "force", "enthalpy")


@dataclass(frozen=True)
class FlowSpec:
    coords: tuple = ("x1", "x2", "x3")
    time: str = "t"
    U: tuple = (0, 0, 0)
    F: tuple = (0, 0, 0)
    h0: object = 0
    T: object = "T"
    transport: object = 0

    @staticmethod
    def from_spec(spec: dict) -> "FlowSpec":
        coords = tuple(spec_names(spec, "coordinates", "(x1, x2, x3)"))
        return FlowSpec(coords, spec_str(spec, "time", "t"),
                        tuple(spec_vector(spec, "U", 3, "(0, 0, 0)")),
                        tuple(spec_vector(spec, "F", 3, "(0, 0, 0)")),
                        spec_expr(spec, "h0", "0"), spec_expr(spec, "T", "T"),
                        spec_expr(spec, "transport", "0"))


def _pad(v, n=3) -> list:
    v = [as_expr(x) for x in v]
    if len(v) > n:
        raise ConfigurationError("vectors have at most 3 components")
    return v + [ZERO] * (n - len(v))


def _grad(f: Expr, xs: list) -> list:
    return [diff(f, x) if x else ZERO for x in xs]


def _curl(u: list, xs: list) -> list:
    def dd(i, j):
        return diff(u[i], xs[j]) if xs[j] else ZERO

    return [dd(2, 1) - dd(1, 2), dd(0, 2) - dd(2, 0), dd(1, 0) - dd(0, 1)]


def _cross(a: list, b: list) -> list:
    return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]


def source_terms(spec: FlowSpec) -> dict:
    """Per-source 1-form coefficient lists on the chart."""
    coords = list(spec.coords)
    if not coords or len(coords) > 3:
        raise ConfigurationError("the flow chart needs a trajectory coordinate and at most two normals")
    if spec.time in coords:
        raise ConfigurationError("the time parameter must not be a chart coordinate")
    n = len(coords)
    xs = coords + [None] * (3 - n)
    U = _pad(spec.U)
    F = _pad(spec.F)
    T = as_expr(spec.T)
    h0 = as_expr(spec.h0)
    pieces = {
        "enthalpy": _grad(h0, xs),
        "rotationality": _cross(U, _curl(U, xs)),
        "force": [-f for f in F],
        "unsteadiness": [diff(u, spec.time) for u in U],
    }
    out = {}
    for name, vec in pieces.items():
        comps = [ZERO] + [simplify(vec[i] / T) for i in range(1, n)]
        out[name] = comps
    out["transport"] = [as_expr(spec.transport)] + [ZERO] * (n - 1)
    return out


def gasdyn_relation(spec: FlowSpec = FlowSpec()) -> CaseReport:
    rep = CaseReport("gas")
    if not spec.coords:
        raise ConfigurationError("missing trajectory coordinate")
    chart = Chart(spec.coords)
    terms = source_terms(spec)
    n = chart.dim
    A = [ZERO] * n
    for comps in terms.values():
        A = [a + c for a, c in zip(A, comps)]
    omega = DForm.one_form(chart, A)
    rep.expr("omega", omega)
    for i, a in enumerate(A):
        rep.expr(f"A[{chart.coords[i]}]", a)
    flags = {name: any(not c.is_zero for c in comps) for name, comps in terms.items()}
    rep.verdict("sources", "present" if any(flags.values()) else "none",
                flags={k: bool(v) for k, v in flags.items()})

    rel = build_relation(None, omega, name="gas")
    cls = classify_relation(rel)
    rep.verdict("relation", rel.status)
    per_source = {}
    for name, comps in terms.items():
        per_source[name] = commutator_with_connection(DForm.one_form(chart, comps))
    attribution = {}
    for comp in cls.nonzero():
        who = [name for name in SOURCES
               if not equals_zero(per_source[name].total(comp.key)).is_zero]
        attribution[comp.label] = who
        rep.expr(comp.label, comp.total)
        rep.verdict(comp.label, comp.status.value, sources=who)
    if rel.status == "identical":
        rep.verdict("isentropic", "yes")
    rep.objects.update(chart=chart, omega=omega, relation=rel, classification=cls, terms=terms,
                       attribution=attribution, flags=flags)
    return rep


def without_sources(spec: FlowSpec, names) -> DForm:
    """omega rebuilt with the named source terms removed."""
    terms = source_terms(spec)
    chart = Chart(spec.coords)
    A = [ZERO] * chart.dim
    for name, comps in terms.items():
        if name in names:
            continue
        A = [a + c for a, c in zip(A, comps)]
    return DForm.one_form(chart, A)
