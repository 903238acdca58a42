"""Potential recovery with the radial homotopy operator.

    (K w)(x) = int_0^1 t^(p-1) i_(x - b) w(b + t (x - b)) dt

The t-integral is done exactly for integrands that are polynomial in t times
at most one power of a sum linear in t, ``(a + b t)^q``.  Anything else is a
:class:`PotentialNotFound`; a recovered potential is always re-differentiated
and compared with the input before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ..errors import DegreeError, EvaluationError, NotClosedError, PotentialNotFound
from ..expr import ZERO, Domain, Expr, cancel, diff, equals_zero, ln, subs
from ..expr.core import Group, Symbol, _depends, _term_expr
from .commutator import Commutator, commutator_with_connection
from .core import DForm, exterior_derivative


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "_"
    return name


def integrate_unit_interval(f: Expr, t: str) -> Expr:
    """Exact value of the integral of ``f`` over t in [0, 1]."""
    total = ZERO
    for mono, c in f.terms:
        m = 0
        group = None
        rest: dict = {}
        for k, e in mono:
            if isinstance(k, Symbol) and k.name == t:
                if e.denominator != 1 or e < 0:
                    raise PotentialNotFound(f"t^{e} is not integrable on [0, 1] by this engine")
                m = int(e)
            elif not _depends(k, t):
                rest[k] = e
            elif isinstance(k, Group) and group is None and len(k.base.terms) > 1:
                s = k.base
                b = diff(s, t)
                if b.is_zero or t in b.free_symbols():
                    raise PotentialNotFound("radial integrand has a non-linear denominator in t")
                group = (subs(s, {t: 0}), b, e)
            else:
                raise PotentialNotFound("radial integrand is not rational in t of the supported shape")
        coeff = _term_expr(c, rest)
        if group is None:
            total = total + coeff.scale(Fraction(1, m + 1))
            continue
        a, b, q = group
        end = a + b
        try:
            acc = ZERO
            for j in range(m + 1):
                weight = comb(m, j) * ((-a) ** (m - j))
                r = j + q + 1
                if r == 0:
                    prim = ln(end) - ln(a)
                else:
                    prim = (end ** r - a ** r).scale(1 / r)
                acc = acc + weight * prim
        except EvaluationError as exc:
            raise PotentialNotFound(f"radial segment meets a singularity ({exc})") from None
        total = total + coeff * acc * (b ** -(m + 1))
    return cancel(total)


def _radial_integrand(w: DForm, base: tuple, t: str) -> dict:
    chart = w.chart
    p = w.degree
    shift = {x: Expr.num(b) + Expr.sym(t) * (Expr.sym(x) - b) for x, b in zip(chart.coords, base)}
    tp = Expr.sym(t) ** (p - 1)
    out: dict = {}
    for key, a in w.coeffs.items():
        a_t = subs(a, shift) * tp
        for pos, alpha in enumerate(key):
            rest = key[:pos] + key[pos + 1:]
            term = a_t * (Expr.sym(chart.coords[alpha]) - base[alpha])
            out[rest] = out.get(rest, ZERO) + (term if pos % 2 == 0 else -term)
    return out


def _check_closed(w: DForm, domain: Domain | None) -> None:
    dw = exterior_derivative(w)
    for key, v in dw.coeffs.items():
        r = equals_zero(v, domain)
        if not r.is_zero:
            raise NotClosedError(f"form is not closed: d(w)[{key}] = {v}")


def default_base(w: DForm, domain: Domain | None) -> tuple:
    if domain is not None and domain.base is not None:
        return tuple(domain.base)
    return tuple(Fraction(0) for _ in w.chart.coords)


def potential(w: DForm, base=None, domain: Domain | None = None) -> DForm:
    """A (p-1)-form chi with d(chi) = w, anchored at ``base`` (default origin)."""
    if w.degree < 1:
        raise DegreeError("a potential needs a form of degree >= 1")
    _check_closed(w, domain)
    base = tuple(Fraction(b) for b in base) if base is not None else default_base(w, domain)
    if len(base) != w.chart.dim:
        raise DegreeError("base point has the wrong dimension")
    t = _fresh("t_h", set(w.free_symbols()) | set(w.chart.coords))
    integrands = _radial_integrand(w, base, t)
    chi = DForm(w.chart, w.degree - 1, {k: integrate_unit_interval(v, t) for k, v in integrands.items()})
    check = exterior_derivative(chi) - w
    for key, v in check.coeffs.items():
        if not equals_zero(v, domain).is_zero:
            raise PotentialNotFound("radial potential does not differentiate back to the form")
    return chi


@dataclass
class ClosureVerdict:
    status: str  # closed_exact | closed_potential_not_found | unclosed
    potential: DForm | None = None
    commutator: Commutator | None = None
    note: str = ""
    verification: str = ""
    base: tuple | None = None
    details: dict = field(default_factory=dict)


def _obstruction(w: DForm, domain: Domain | None, base: tuple) -> str:
    if domain is None or not domain.exclude:
        return ""
    coords = w.chart.coords
    for p in domain.exclude:
        named = dict(zip(domain.coords, p))
        interior = True
        for x in coords:
            if x not in named:
                continue
            if domain.has(x):
                lo, hi = domain.interval(x)
                if not lo < named[x] < hi:
                    interior = False
        if interior:
            return (f"domain is not star-shaped: excluded point {_pt(p)} lies inside the box, "
                    f"so radial segments from any base point cross it")
    for p in domain.exclude:
        named = dict(zip(domain.coords, p))
        if all(named.get(x) == b for x, b in zip(coords, base)):
            return f"base point {_pt(base)} is an excluded point"
    return ""


def _pt(p) -> str:
    return "(" + ", ".join(str(x) for x in p) + ")"


def closure_classify(w: DForm, base=None, domain: Domain | None = None, connection=None) -> ClosureVerdict:
    """closed_exact(potential), closed_potential_not_found(note) or unclosed(commutator)."""
    k = commutator_with_connection(w, connection)
    for key in k.keys():
        if not equals_zero(k.total(key), domain).is_zero:
            return ClosureVerdict("unclosed", commutator=k, note="commutator has nonzero components")
    base = tuple(Fraction(b) for b in base) if base is not None else default_base(w, domain)
    note = _obstruction(w, domain, base)
    if note:
        return ClosureVerdict("closed_potential_not_found", commutator=k, note=note, base=base)
    try:
        chi = potential(w, base, domain)
    except PotentialNotFound as exc:
        return ClosureVerdict("closed_potential_not_found", commutator=k, note=str(exc), base=base)
    statuses = [equals_zero(v, domain).status.value for v in (exterior_derivative(chi) - w).coeffs.values()]
    verification = "proved_zero" if all(s == "proved_zero" for s in statuses) else "numerically_zero"
    return ClosureVerdict("closed_exact", potential=chi, commutator=k,
                          note=f"radial homotopy from base point {_pt(base)}", verification=verification, base=base)
