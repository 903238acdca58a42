"""Degree descent: integrate an identical relation down one degree at a time."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NotClosedError, PotentialNotFound, PreconditionError
from ..forms import DForm, potential
from .relation import IDENTICAL, EvolutionaryRelation, build_relation, fresh_unknown


@dataclass
class DescentStep:
    degree: int  # degree of the closed form integrated at this step
    potential: DForm | None
    status: str  # status of the relation built from the potential, or "k=0"
    note: str = ""


@dataclass
class DescentReport:
    steps: list = field(default_factory=list)
    final_degree: int = -1
    halted: str = ""

    @property
    def reached_zero(self) -> bool:
        return self.final_degree == 0


def degree_descent(r: EvolutionaryRelation, base=None) -> DescentReport:
    """Recover potentials while relations stay identical; stops at k = 0."""
    if r.status != IDENTICAL:
        raise PreconditionError("degree descent needs an identical relation")
    report = DescentReport()
    cur = r
    for _ in range(r.degree + 1):
        p = cur.degree
        try:
            chi = potential(cur.omega, base, cur.domain)
        except (PotentialNotFound, NotClosedError) as exc:
            report.steps.append(DescentStep(p, None, "halted", str(exc)))
            report.final_degree = p
            report.halted = f"potential not recoverable at degree {p}"
            return report
        if p - 1 == 0:
            report.steps.append(DescentStep(p, chi, "k=0", "scalar potential reached"))
            report.final_degree = 0
            return report
        nxt = build_relation(fresh_unknown(cur.chart, p - 2), chi, None, cur.domain, name=f"{cur.name}'")
        report.steps.append(DescentStep(p, chi, nxt.status))
        if nxt.status != IDENTICAL:
            report.final_degree = p - 1
            report.halted = f"relation of degree {p - 1} is nonidentical"
            return report
        cur = nxt
    report.final_degree = cur.degree
    return report
