"""Degenerate-transformation loci and restriction of relations onto them.

Candidate loci come from factoring each nonzero commutator component: every
factor that can vanish gives a constraint h = 0.  A constraint that is linear
in some coordinate with a coordinate-free coefficient is solved and turned
into a parametrization, which is kept only if the relation restricted onto it
is identical.  A grid scan of the domain box adds sign-change evidence.

For first-degree relations on a two-dimensional chart the integrating
direction of d(psi) is also reported: along dx2/dx1 = -(d1 psi)/(d2 psi) the
differential of psi vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from ..errors import EvaluationError, PreconditionError
from ..expr import ONE, Domain, Expr, FunctionBodies, cancel, content, diff, equals_zero, eval_array, simplify, subs
from ..expr.core import Call, Group, Symbol
from ..forms import Chart, DForm, ParamMap, exterior_derivative, pullback
from .relation import IDENTICAL, NONIDENTICAL, EvolutionaryRelation, build_relation


@dataclass
class Constraint:
    expr: Expr
    sources: list
    multiplicity: int = 1
    parametrization: ParamMap | None = None
    verified: bool = False
    note: str = ""


@dataclass
class IntegratingDirection:
    ratio: Expr
    along: str
    against: str
    family: ParamMap | None = None
    verified: bool = False
    dpsi_pullback: DForm | None = None


@dataclass
class Pseudostructure:
    constraints: list
    evidence: list
    direction: IntegratingDirection | None = None
    dropped: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.constraints and not any(e.get("sign_changes", 0) for e in self.evidence)

    def parametrized(self) -> list:
        return [c for c in self.constraints if c.parametrization is not None]


def _provably_positive(e: Expr) -> bool:
    """All coefficients positive and every exponent an even integer (or exp kernels)."""
    if not e.terms:
        return False
    for mono, c in e.terms:
        if c <= 0:
            return False
        for k, ex in mono:
            if isinstance(k, Call) and k.builtin and k.name == "exp":
                continue
            if ex.denominator != 1 or int(ex) % 2:
                return False
    return True


def factor_expr(e: Expr, coords) -> tuple:
    """Split ``e`` into candidate zero factors.

    Returns ``(factors, dropped)``: factors is a list of ``(expr, multiplicity)``,
    dropped lists ``(expr, reason)`` for constants, parameters, poles and
    provably positive factors.
    """
    coords = set(coords)
    c, m, s = content(e)
    factors = []
    dropped = []
    for mono, _ in m.terms:
        for k, ex in mono:
            fx = Expr.kernel(k)
            if isinstance(k, Group):
                fx = k.base
            if ex < 0:
                dropped.append((fx, "pole"))
                continue
            if not (fx.free_symbols() & coords):
                dropped.append((fx, "free of coordinates"))
                continue
            if isinstance(k, Call) and k.builtin and k.name == "exp":
                dropped.append((fx, "positive"))
                continue
            mult = int(ex) if ex.denominator == 1 else 1
            factors.append((fx, mult))
    if s != ONE and not s.is_number:
        if not (s.free_symbols() & coords):
            dropped.append((s, "free of coordinates"))
        elif _provably_positive(s):
            dropped.append((s, "positive"))
        else:
            factors.append((s, 1))
    return factors, dropped


def _solve_linear_coordinate(h: Expr, chart: Chart):
    """Return (coordinate, solution) when h is linear in a coordinate with a constant slope."""
    coords = set(chart.coords)
    for x in chart.coords:
        if x not in h.free_symbols():
            continue
        a = diff(h, x)
        if a.is_zero or (a.free_symbols() & coords):
            continue
        rest = subs(h, {x: 0})
        if (h - a * Expr.sym(x) - rest).is_zero:
            return x, cancel(-rest / a)
    return None


def param_from_solution(chart: Chart, x: str, value: Expr) -> ParamMap | None:
    others = [c for c in chart.coords if c != x]
    if not others:
        return None
    images = [value if c == x else Expr.sym(c) for c in chart.coords]
    return ParamMap(Chart(others), chart, images)


def restrict_relation(r: EvolutionaryRelation, phi: ParamMap) -> EvolutionaryRelation:
    """Pull both sides back along ``phi`` and classify on the parameter chart.

    The connection is not carried over: the parameter chart has no connection
    of its own.
    """
    psi = pullback(phi, r.psi)
    omega = pullback(phi, r.omega)
    return build_relation(psi, omega, None, r.domain, name=f"{r.name}|restricted")


def _grid_evidence(r: EvolutionaryRelation, key, total: Expr, points: int = 9) -> dict:
    chart = r.chart
    dom = r.domain or Domain()
    axes = []
    for x in chart.coords:
        if dom.has(x):
            lo, hi = dom.interval(x)
        else:
            lo, hi = Fraction(-2), Fraction(2)
        axes.append(np.linspace(float(lo), float(hi), points))
    mesh = np.meshgrid(*axes, indexing="ij")
    env = {x: mesh[i] for i, x in enumerate(chart.coords)}
    for name in sorted(total.free_symbols() - set(chart.coords)):
        lo, hi = dom.interval(name)
        env[name] = float((lo + hi) / 2)
    info = {"component": r.commutator.label(key), "grid_points": points ** chart.dim}
    try:
        vals = eval_array(total, env, FunctionBodies(seed=dom.seed), shape=mesh[0].shape)
    except EvaluationError as exc:
        info.update(sign_changes=0, note=f"not evaluable on the grid: {exc}")
        return info
    sgn = np.sign(vals)
    changes = 0
    for axis in range(chart.dim):
        a = np.take(sgn, range(points - 1), axis=axis)
        b = np.take(sgn, range(1, points), axis=axis)
        changes += int(np.sum(a * b < 0)) + int(np.sum((a == 0) ^ (b == 0)))
    info["sign_changes"] = changes
    return info


def integrating_direction(r: EvolutionaryRelation) -> IntegratingDirection | None:
    """Direction along which d(psi) vanishes, for degree-1 relations on a 2-chart."""
    if r.degree != 1 or r.chart.dim != 2:
        return None
    chart = r.chart
    x1, x2 = chart.coords
    psi = r.psi.value
    d1 = diff(psi, x1)
    d2 = diff(psi, x2)
    if d2.is_zero:
        return None
    ratio = simplify(cancel(-d1 / d2))
    direction = IntegratingDirection(ratio, along=x1, against=x2)
    if ratio.free_symbols() & set(chart.coords):
        return direction
    k = "k"
    taken = set(r.omega.free_symbols()) | set(r.psi.free_symbols()) | set(chart.coords)
    while k in taken:
        k += "_"
    phi = ParamMap(Chart([x1]), chart, [Expr.sym(x1), ratio * Expr.sym(x1) + Expr.sym(k)])
    restricted = restrict_relation(r, phi)
    dpsi = pullback(phi, exterior_derivative(r.psi))
    dpsi_zero = all(equals_zero(v, r.domain).is_zero for v in dpsi.coeffs.values())
    direction.family = phi
    direction.verified = restricted.status == IDENTICAL and dpsi_zero
    direction.dpsi_pullback = dpsi
    return direction


def degenerate_loci(r: EvolutionaryRelation, grid_points: int = 9) -> Pseudostructure:
    if r.status != NONIDENTICAL:
        raise PreconditionError("relation is already identical everywhere")
    chart = r.chart
    found: dict = {}
    dropped = []
    evidence = []
    for key in r.nonzero_keys():
        total = simplify(r.commutator.total(key))
        label = r.commutator.label(key)
        factors, drop = factor_expr(total, chart.coords)
        dropped.extend((str(f), why, label) for f, why in drop)
        for fx, mult in factors:
            if fx in found:
                found[fx].sources.append(label)
            else:
                found[fx] = Constraint(fx, [label], mult)
        evidence.append(_grid_evidence(r, key, total, grid_points))
    constraints = []
    for fx, con in found.items():
        sol = _solve_linear_coordinate(fx, chart)
        if sol is None:
            con.note = "no linear solution for a coordinate; constraint kept without parametrization"
        else:
            x, value = sol
            phi = param_from_solution(chart, x, value)
            if phi is None:
                con.note = f"isolated point {x} = {value}"
            else:
                restricted = restrict_relation(r, phi)
                if restricted.status == IDENTICAL:
                    con.parametrization = phi
                    con.verified = True
                else:
                    con.note = "restricted relation is not identical; parametrization withheld"
        constraints.append(con)
    direction = integrating_direction(r)
    return Pseudostructure(constraints, evidence, direction, dropped)
