"""The commutator of a form in the presence of a connection.

For a 1-form the components are

    K_ab = (d_a w_b - d_b w_a) + (G^s_ba - G^s_ab) w_s

that is, the exterior derivative plus the torsion contraction.  For higher
degree the same construction is applied to the antisymmetrized covariant
derivative

    K_{a0..ap} = sum_i (-1)^i D_{ai} w_{a0..^ai..ap},
    D_a w_{b1..bp} = d_a w_{b1..bp} + sum_j G^s_{bj a} w_{b1..s..bp},

so only the antisymmetric part of the connection survives.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegreeError
from ..expr import ZERO, Expr
from .core import Chart, DForm, _check_chart, basis_string, exterior_derivative


@dataclass(frozen=True)
class Commutator:
    chart: Chart
    degree: int
    entries: dict  # key -> (flat, connection)

    def total(self, key) -> Expr:
        f, c = self.entries.get(tuple(key), (ZERO, ZERO))
        return f + c

    def flat(self, key) -> Expr:
        return self.entries.get(tuple(key), (ZERO, ZERO))[0]

    def connection(self, key) -> Expr:
        return self.entries.get(tuple(key), (ZERO, ZERO))[1]

    def totals(self) -> DForm:
        return DForm(self.chart, self.degree, {k: f + c for k, (f, c) in self.entries.items()})

    def flat_form(self) -> DForm:
        return DForm(self.chart, self.degree, {k: f for k, (f, _) in self.entries.items()})

    def connection_form(self) -> DForm:
        return DForm(self.chart, self.degree, {k: c for k, (_, c) in self.entries.items()})

    def keys(self) -> list:
        return sorted(self.entries)

    def label(self, key) -> str:
        return "K[" + ",".join(self.chart.coords[i] for i in key) + "]"

    def basis(self, key) -> str:
        return basis_string(self.chart, key)


def commutator_with_connection(w: DForm, connection=None) -> Commutator:
    """Split the commutator of ``w`` into flat and connection parts."""
    if w.degree < 1:
        raise DegreeError("the commutator needs a form of degree >= 1; use the exterior derivative for scalars")
    chart = w.chart
    flat = exterior_derivative(w)
    entries: dict = {}
    if connection is not None:
        _check_chart(connection.chart, chart)
    for key in chart.keys(w.degree + 1):
        f = flat.coeffs.get(key, ZERO)
        conn = ZERO
        if connection is not None:
            conn = _connection_part(w, connection, key)
        if not f.is_zero or not conn.is_zero:
            entries[key] = (f, conn)
    return Commutator(chart, w.degree + 1, entries)


def _connection_part(w: DForm, g, key: tuple) -> Expr:
    n = w.chart.dim
    total = ZERO
    for i, alpha in enumerate(key):
        rest = key[:i] + key[i + 1:]
        inner = ZERO
        for j, beta in enumerate(rest):
            for sigma in range(n):
                gam = g.component(sigma, beta, alpha)
                if gam.is_zero:
                    continue
                idx = rest[:j] + (sigma,) + rest[j + 1:]
                a = w[idx]
                if a.is_zero:
                    continue
                inner = inner + gam * a
        total = total + (inner if i % 2 == 0 else -inner)
    return total
