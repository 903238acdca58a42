"""Relations d(psi) = omega and their classification."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ChartMismatch, DegreeError
from ..expr import Domain, Expr, ZeroStatus, equals_zero, func, simplify
from ..forms import Chart, Commutator, DForm, commutator_with_connection
from ..forms.core import basis_string

IDENTICAL = "identical"
NONIDENTICAL = "nonidentical"


def fresh_unknown(chart: Chart, degree: int, name: str = "psi") -> DForm:
    """A form whose coefficients are opaque functions of every coordinate."""
    args = chart.symbols()
    if degree == 0:
        return DForm.scalar(chart, func(name, *args))
    comps = {}
    for key in chart.keys(degree):
        suffix = "".join(chart.coords[i] for i in key)
        comps[key] = func(f"{name}_{suffix}", *args)
    return DForm(chart, degree, comps)


@dataclass
class EvolutionaryRelation:
    psi: DForm
    omega: DForm
    connection: object = None
    status: str = ""
    commutator: Commutator | None = None
    verdicts: dict = field(default_factory=dict)  # key -> ZeroResult
    domain: Domain | None = None
    name: str = "r"

    @property
    def chart(self) -> Chart:
        return self.omega.chart

    @property
    def degree(self) -> int:
        return self.omega.degree

    @property
    def identical(self) -> bool:
        return self.status == IDENTICAL

    def nonzero_keys(self) -> list:
        return [k for k, v in self.verdicts.items() if not v.is_zero]


def build_relation(psi: DForm | None, omega: DForm, connection=None, domain: Domain | None = None,
                   name: str = "r") -> EvolutionaryRelation:
    """Assemble the relation and compute its status from the commutator of omega."""
    if omega.degree < 1:
        raise DegreeError("a relation needs a right-hand side of degree >= 1")
    if psi is None:
        psi = fresh_unknown(omega.chart, omega.degree - 1)
    if psi.chart != omega.chart:
        raise ChartMismatch(f"psi lives on {psi.chart} but omega on {omega.chart}")
    if psi.degree + 1 != omega.degree:
        raise DegreeError(f"deg omega = {omega.degree} must equal deg psi + 1 = {psi.degree + 1}")
    k = commutator_with_connection(omega, connection)
    verdicts = {key: equals_zero(k.total(key), domain) for key in k.keys()}
    status = IDENTICAL if all(v.is_zero for v in verdicts.values()) else NONIDENTICAL
    return EvolutionaryRelation(psi, omega, connection, status, k, verdicts, domain, name)


def _single_terms(omega: DForm):
    for key, coef in omega.coeffs.items():
        for mono, c in coef.terms:
            yield key, Expr(((mono, c),))


def attribute_terms(r: EvolutionaryRelation) -> dict:
    """For each nonzero commutator component, the omega terms that feed it."""
    out: dict = {}
    nonzero = set(r.nonzero_keys())
    if not nonzero:
        return out
    for key, term in _single_terms(r.omega):
        piece = DForm(r.chart, r.degree, {key: term})
        kp = commutator_with_connection(piece, r.connection)
        label_term = term_label(r.chart, key, term)
        for ck in kp.keys():
            if ck in nonzero and not kp.total(ck).is_zero:
                out.setdefault(ck, []).append(label_term)
    return out


def term_label(chart: Chart, key: tuple, coef: Expr) -> str:
    return str(DForm(chart, len(key), {key: coef}))


@dataclass
class ComponentReport:
    key: tuple
    label: str
    basis: str
    flat: Expr
    connection: Expr
    total: Expr
    status: ZeroStatus
    attribution: list


@dataclass
class RelationReport:
    status: str
    degree: int
    components: list
    psi: DForm
    omega: DForm

    def nonzero(self) -> list:
        return [c for c in self.components if c.status is ZeroStatus.NONZERO]


def classify_relation(r: EvolutionaryRelation) -> RelationReport:
    """Per-component verdicts, flat vs connection split, and term attribution."""
    attr = attribute_terms(r) if r.status == NONIDENTICAL else {}
    comps = []
    for key in r.commutator.keys():
        f = r.commutator.flat(key)
        c = r.commutator.connection(key)
        comps.append(ComponentReport(
            key=key,
            label=r.commutator.label(key),
            basis=basis_string(r.chart, key),
            flat=simplify(f),
            connection=simplify(c),
            total=simplify(f + c),
            status=r.verdicts[key].status,
            attribution=attr.get(key, []),
        ))
    return RelationReport(r.status, r.degree, comps, r.psi, r.omega)
