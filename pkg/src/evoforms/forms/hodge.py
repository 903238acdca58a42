"""Metric Hodge dual.

    (*w)_J = sqrt|det g| * sum_I w^I * sign(I, J)

over increasing index sets I with J the complement, where the raised
components w^I use the minors of the inverse metric.  The square root is taken
under the positivity convention of the expression engine, so sqrt(sin(t)^2)
becomes sin(t).
"""
from __future__ import annotations

from fractions import Fraction

from ..expr import ZERO, Domain
from .core import DForm, _check_chart, determinant, perm_sign


def hodge_star(w: DForm, metric, domain: Domain | None = None) -> DForm:
    _check_chart(w.chart, metric.chart)
    chart = w.chart
    n = chart.dim
    sign = metric.check_nondegenerate(domain)
    det = metric.det()
    root = (det if sign > 0 else -det) ** Fraction(1, 2)
    ginv = metric.inverse()
    p = w.degree
    out: dict = {}
    for upper in chart.keys(p):
        raised = ZERO
        for key, a in w.coeffs.items():
            minor = determinant([[ginv[i][j] for j in key] for i in upper])
            if not minor.is_zero:
                raised = raised + minor * a
        if raised.is_zero:
            continue
        comp = tuple(i for i in range(n) if i not in upper)
        s = perm_sign(upper + comp)
        out[comp] = out.get(comp, ZERO) + (raised if s > 0 else -raised) * root
    return DForm(chart, n - p, out)
