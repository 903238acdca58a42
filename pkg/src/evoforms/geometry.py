"""Connections and metrics: torsion, curvature, Christoffel symbols.

Index conventions: ``Connection.component(r, m, n)`` is G^r_{mn};
``CurvatureTensor.component(r, s, m, n)`` is

    R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import ChartMismatch, ConfigurationError, DegenerateMetric, EvaluationError
from .expr import ZERO, Domain, Expr, as_expr, diff, equals_zero, eval_at
from .forms.core import Chart, determinant


class Connection:
    """Components G^r_{mn}; unspecified components are zero."""

    def __init__(self, chart: Chart, components: Mapping[tuple, object] | None = None):
        self.chart = chart
        n = chart.dim
        comps = {}
        for key, v in (components or {}).items():
            idx = tuple(chart.index(k) if isinstance(k, str) else int(k) for k in key)
            if len(idx) != 3 or any(not 0 <= i < n for i in idx):
                raise ChartMismatch(f"connection index {key} does not fit chart {chart}")
            v = as_expr(v)
            if not v.is_zero:
                comps[idx] = v
        self.components = dict(sorted(comps.items()))

    def component(self, r: int, m: int, n: int) -> Expr:
        return self.components.get((r, m, n), ZERO)

    @staticmethod
    def zero(chart: Chart) -> "Connection":
        return Connection(chart, {})

    def label(self, r: int, m: int, n: int) -> str:
        c = self.chart.coords
        return f"G[{c[r]}][{c[m]}][{c[n]}]"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Connection) and self.chart == other.chart and self.components == other.components

    def __repr__(self) -> str:
        return f"Connection({self.chart}, {len(self.components)} components)"


class Metric:
    """Symmetric matrix g_{mn}; symmetry is enforced from the upper triangle."""

    def __init__(self, chart: Chart, matrix: Sequence[Sequence[object]]):
        n = chart.dim
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ChartMismatch(f"metric must be {n}x{n} on chart {chart}")
        rows = [[as_expr(v) for v in row] for row in matrix]
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ConfigurationError(f"metric is not symmetric at ({i}, {j})")
        self.chart = chart
        self.matrix = rows
        self._inverse = None

    @staticmethod
    def diag(chart: Chart, entries: Sequence[object]) -> "Metric":
        n = chart.dim
        if len(entries) != n:
            raise ChartMismatch(f"diag needs {n} entries on chart {chart}")
        return Metric(chart, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def identity(chart: Chart) -> "Metric":
        return Metric.diag(chart, [1] * chart.dim)

    def det(self) -> Expr:
        return determinant(self.matrix)

    def check_nondegenerate(self, domain: Domain | None = None, probes: int = 8) -> int:
        """Sign of det g at probe points; raises DegenerateMetric if it vanishes."""
        det = self.det()
        if det.is_zero:
            raise DegenerateMetric("metric determinant is identically zero")
        n = det.as_number()
        if n is not None:
            return 1 if n > 0 else -1
        domain = domain or Domain()
        rng = random.Random(domain.seed + 101)
        names = sorted(det.free_symbols())
        sign = 0
        for _ in range(probes):
            point = domain.sample(names, rng)
            try:
                v = float(eval_at(det, point))
            except EvaluationError:
                continue
            if abs(v) <= 1e-9:
                raise DegenerateMetric(f"metric determinant vanishes numerically at {point}")
            sign = sign or (1 if v > 0 else -1)
        return sign or 1

    def inverse(self) -> list:
        if self._inverse is None:
            n = self.chart.dim
            det = self.det()
            if det.is_zero:
                raise DegenerateMetric("metric determinant is identically zero")
            inv = [[ZERO] * n for _ in range(n)]
            diagonal = all(self.matrix[i][j].is_zero for i in range(n) for j in range(n) if i != j)
            if diagonal:
                for i in range(n):
                    inv[i][i] = self.matrix[i][i] ** -1
                self._inverse = inv
                return inv
            inv_det = det ** -1
            for i in range(n):
                for j in range(n):
                    minor = [row[:i] + row[i + 1:] for k, row in enumerate(self.matrix) if k != j]
                    cof = determinant(minor)
                    if (i + j) % 2:
                        cof = -cof
                    inv[i][j] = cof * inv_det
            self._inverse = inv
        return self._inverse


@dataclass(frozen=True)
class CurvatureTensor:
    chart: Chart
    components: dict  # (r, s, m, n) -> Expr, nonzero only

    def component(self, r: int, s: int, m: int, n: int) -> Expr:
        return self.components.get((r, s, m, n), ZERO)

    def label(self, r, s, m, n) -> str:
        c = self.chart.coords
        return f"R[{c[r]}][{c[s]}][{c[m]}][{c[n]}]"


def torsion(g: Connection) -> dict:
    """T^r_{mn} = G^r_{mn} - G^r_{nm}, nonzero components only."""
    n = g.chart.dim
    out = {}
    for r, m, k in product(range(n), repeat=3):
        v = g.component(r, m, k) - g.component(r, k, m)
        if not v.is_zero:
            out[(r, m, k)] = v
    return out


def curvature(g: Connection) -> CurvatureTensor:
    n = g.chart.dim
    xs = g.chart.coords
    out = {}
    for r, s, m, k in product(range(n), repeat=4):
        if m == k:
            continue
        v = diff(g.component(r, k, s), xs[m]) - diff(g.component(r, m, s), xs[k])
        for lam in range(n):
            v = v + g.component(r, m, lam) * g.component(lam, k, s) - g.component(r, k, lam) * g.component(lam, m, s)
        if not v.is_zero:
            out[(r, s, m, k)] = v
    return CurvatureTensor(g.chart, out)


def levi_civita(m: Metric, domain: Domain | None = None) -> Connection:
    """Christoffel symbols G^r_{mn} = 1/2 g^{rl}(d_m g_ln + d_n g_lm - d_l g_mn)."""
    m.check_nondegenerate(domain)
    n = m.chart.dim
    xs = m.chart.coords
    g = m.matrix
    ginv = m.inverse()
    dg = [[[diff(g[i][j], xs[k]) for k in range(n)] for j in range(n)] for i in range(n)]
    comps = {}
    for r, a, b in product(range(n), repeat=3):
        if b < a:
            continue
        v = ZERO
        for lam in range(n):
            if ginv[r][lam].is_zero:
                continue
            s = dg[lam][b][a] + dg[lam][a][b] - dg[a][b][lam]
            if not s.is_zero:
                v = v + ginv[r][lam] * s
        v = v.scale(Fraction(1, 2))
        if not v.is_zero:
            comps[(r, a, b)] = v
            comps[(r, b, a)] = v
    return Connection(m.chart, comps)


@dataclass
class ClosureReport:
    degree0: dict
    degree1: dict
    degree2: dict
    degree3: dict
    classification: str
    torsion: dict = field(default_factory=dict)
    curvature: CurvatureTensor | None = None


def metric_closure_report(g: Connection, m: Metric | None = None, domain: Domain | None = None) -> ClosureReport:
    """Degree-0, -1 and -3 metric-form commutators and the manifold classification.

    The degree-2 commutator has no componentwise definition here and is
    reported as not computed.
    """
    tors = torsion(g)
    curv = curvature(g)
    nonzero_t = {k: v for k, v in tors.items() if not equals_zero(v, domain).is_zero}
    nonzero_r = {k: v for k, v in curv.components.items() if not equals_zero(v, domain).is_zero}
    d0 = {"status": "zero" if not g.components else "nonzero",
          "note": "connection coefficients themselves (informational)"}
    d1 = {"status": "zero" if not nonzero_t else "nonzero", "nonzero_components": len(nonzero_t)}
    d2 = {"status": "not-computed", "note": "no componentwise definition is available for this degree"}
    d3 = {"status": "zero" if not nonzero_r else "nonzero", "nonzero_components": len(nonzero_r)}
    if not nonzero_t and not nonzero_r:
        cls = "closed metric forms"
    else:
        quals = []
        if nonzero_t:
            quals.append("torsion")
        if nonzero_r:
            quals.append("curved")
        cls = f"deforming manifold ({', '.join(quals)})"
    if m is not None:
        d0["metric"] = "supplied"
    return ClosureReport(d0, d1, d2, d3, cls, nonzero_t, CurvatureTensor(g.chart, nonzero_r))
