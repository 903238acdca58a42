"""Pfaffian integrability and integrating factors.

A 1-form w admits an integrating factor locally exactly when w ^ dw = 0.
The factor search tries, in order: mu = 1 for a closed form, a power product
mu = prod x_i^e_i (a linear system in the exponents), and a function of one
coordinate mu = exp(G(x_a)) with G' read off from the closure equations.
Every candidate is checked by testing d(mu * w) for zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DegreeError, EvaluationError, PotentialNotFound
from ..expr import ONE, ZERO, Domain, Expr, cancel, equals_zero, exp
from ..forms import DForm, Chart, exterior_derivative, wedge
from ..forms.homotopy import integrate_unit_interval
from ..expr import subs


@dataclass
class FrobeniusResult:
    integrable: bool
    witness: DForm
    statuses: dict
    note: str = ""

    @property
    def verdict(self) -> str:
        return "integrable" if self.integrable else "nonintegrable"


def frobenius_test(omega: DForm, domain: Domain | None = None) -> FrobeniusResult:
    if omega.degree != 1:
        raise DegreeError("the Frobenius test applies to 1-forms")
    w3 = wedge(omega, exterior_derivative(omega))
    statuses = {k: equals_zero(v, domain) for k, v in w3.coeffs.items()}
    integrable = all(s.is_zero for s in statuses.values())
    note = ""
    if omega.chart.dim <= 2:
        note = "every 3-form vanishes on a chart of dimension <= 2"
    return FrobeniusResult(integrable, w3, statuses, note)


def _closed(w: DForm, domain: Domain | None) -> bool:
    return all(equals_zero(v, domain).is_zero for v in exterior_derivative(w).coeffs.values())


def _solve_linear(rows: list, nvars: int) -> list | None:
    """Gauss-Jordan over Fractions; free variables are set to zero."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for row in m[r:]:
        if row[nvars] != 0:
            return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(pivots):
        sol[c] = m[i][nvars]
    return sol


def _power_ansatz(omega: DForm, names: Sequence[str]) -> Expr | None:
    chart = omega.chart
    idx = [chart.index(n) for n in names if n in chart.coords]
    if not idx:
        return None
    pos = {a: i for i, a in enumerate(idx)}
    rows = []
    for a in range(chart.dim):
        for b in range(a + 1, chart.dim):
            xa, xb = chart.symbols()[a], chart.symbols()[b]
            wa, wb = omega[a], omega[b]
            k = (exterior_derivative(omega))[(a, b)]
            parts = [ZERO] * len(idx)
            if a in pos:
                parts[pos[a]] = parts[pos[a]] + wb / xa
            if b in pos:
                parts[pos[b]] = parts[pos[b]] - wa / xb
            monos = set()
            for e in parts + [k]:
                monos |= {m for m, _ in e.terms}
            for mono in sorted(monos, key=lambda m: tuple((kk.key, ee) for kk, ee in m)):
                row = [p.coefficient_map().get(mono, Fraction(0)) for p in parts]
                row.append(-k.coefficient_map().get(mono, Fraction(0)))
                rows.append(row)
    sol = _solve_linear(rows, len(idx))
    if sol is None or all(s == 0 for s in sol):
        return None
    mu = ONE
    for a, e in zip(idx, sol):
        if e != 0:
            mu = mu * chart.symbols()[a] ** e
    return mu


def _one_variable(omega: DForm, domain: Domain | None) -> list:
    """Candidates mu = exp(G(x_a)) for each coordinate a."""
    chart = omega.chart
    dw = exterior_derivative(omega)
    out = []
    coords = set(chart.coords)
    for a in range(chart.dim):
        g = None
        ok = True
        for b in range(chart.dim):
            if b == a:
                continue
            i, j = min(a, b), max(a, b)
            kab = dw[(i, j)] if a < b else -dw[(i, j)]  # K_ab with a first
            wb = omega[b]
            if wb.is_zero:
                if not equals_zero(kab, domain).is_zero:
                    ok = False
                    break
                continue
            cand = cancel(-kab / wb)
            if (cand.free_symbols() & coords) - {chart.coords[a]}:
                ok = False
                break
            if g is None:
                g = cand
            elif not equals_zero(g - cand, domain).is_zero:
                ok = False
                break
        for b in range(chart.dim):
            for c in range(b + 1, chart.dim):
                if a not in (b, c) and not equals_zero(dw[(b, c)], domain).is_zero:
                    ok = False
        if not ok or g is None or g.is_zero:
            continue
        x = chart.coords[a]
        for base in (Fraction(0), Fraction(1)):
            t = "t_i"
            while t in g.free_symbols() or t in coords:
                t += "_"
            try:
                shifted = subs(g, {x: Expr.num(base) + Expr.sym(t) * (Expr.sym(x) - base)})
                integral = integrate_unit_interval(shifted * (Expr.sym(x) - base), t)
            except (PotentialNotFound, EvaluationError):
                continue
            out.append(exp(integral))
            break
    return out


def find_integrating_factor(omega: DForm, ansatz: Sequence[str] | None = None,
                            domain: Domain | None = None) -> Expr | None:
    """A factor mu with d(mu * omega) = 0, or None when none is found."""
    if omega.degree != 1:
        raise DegreeError("integrating factors are searched for 1-forms")
    if _closed(omega, domain):
        return ONE
    if not frobenius_test(omega, domain).integrable:
        return None
    names = list(ansatz) if ansatz else list(omega.chart.coords)
    candidates = []
    mu = _power_ansatz(omega, names)
    if mu is not None:
        candidates.append(mu)
    candidates.extend(_one_variable(omega, domain))
    for mu in candidates:
        if _closed(omega * mu, domain):
            return mu
    return None
