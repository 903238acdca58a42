"""Finite-difference cross-checks of symbolic exterior derivatives.

Central second-order differences are taken at the interior nodes of a regular
grid over the sampling box.  For each component of d(w) the error reported is

    max |fd - sym| / max(max |sym|, max |partial terms|, 1e-12)

over the interior nodes, i.e. a norm-wise relative error.  Normalizing by the
individual partial derivatives as well keeps the measure meaningful when the
antisymmetrized sum itself is close to zero.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import ConfigurationError, EvaluationError, Singularity
from .expr import Domain, FunctionBodies, eval_array
from .forms import Chart, DForm, exterior_derivative

FLAG_THRESHOLD = 1e-5
REL_FLOOR = 1e-12


@dataclass(frozen=True)
class GridSampler:
    chart: Chart
    box: tuple  # ((lo, hi), ...) per coordinate, chart order
    points: int = 5
    h: float = 1e-3

    def __post_init__(self):
        if self.points < 3:
            raise ConfigurationError("a grid needs at least 3 points per axis")
        if len(self.box) != self.chart.dim:
            raise ConfigurationError("one interval per chart coordinate is required")

    @staticmethod
    def from_domain(chart: Chart, domain: Domain | None, points: int = 5, h: float = 1e-3) -> "GridSampler":
        domain = domain or Domain()
        box = tuple(tuple(float(v) for v in domain.interval(x)) for x in chart.coords)
        g = GridSampler(chart, box, points, h)
        g.check_exclusions(domain)
        return g

    def with_h(self, h: float) -> "GridSampler":
        return GridSampler(self.chart, self.box, self.points, h)

    def axes(self) -> list:
        return [np.linspace(lo, hi, self.points) for lo, hi in self.box]

    def mesh(self) -> list:
        return np.meshgrid(*self.axes(), indexing="ij")

    def shape(self) -> tuple:
        return (self.points,) * self.chart.dim

    def check_exclusions(self, domain: Domain) -> None:
        mesh = self.mesh()
        for p in domain.exclude:
            named = dict(zip(domain.coords, p))
            dist = np.zeros(self.shape())
            for i, x in enumerate(self.chart.coords):
                if x in named:
                    dist = np.maximum(dist, np.abs(mesh[i] - float(named[x])))
            if np.any(dist < 2 * self.h):
                raise ConfigurationError(
                    "grid comes within 2h of the excluded point (" + ", ".join(str(x) for x in p) + ")")


@dataclass
class FieldSamples:
    shape: tuple
    values: dict  # key -> ndarray


def parameter_bindings(names, seed: int = 0, domain: Domain | None = None) -> dict:
    """Deterministic values for non-coordinate symbols, drawn from the domain."""
    domain = domain or Domain()
    rng = random.Random(seed + 17)
    out = {}
    for n in sorted(names):
        lo, hi = domain.interval(n)
        out[n] = float(lo + (hi - lo) * Fraction(rng.randrange(1, 1024), 1024))
    return out


def _env(sampler: GridSampler, bindings: Mapping[str, float], offset=None) -> dict:
    mesh = sampler.mesh()
    env = dict(bindings)
    for i, x in enumerate(sampler.chart.coords):
        env[x] = mesh[i] + (offset[i] if offset is not None else 0.0)
    return env


def _check_bound(w: DForm, bindings: Mapping[str, float]) -> None:
    missing = w.free_symbols() - set(w.chart.coords) - set(bindings)
    if missing:
        raise ConfigurationError(f"unbound symbol(s): {', '.join(sorted(missing))}")


def sample_form(w: DForm, sampler: GridSampler, bindings: Mapping[str, float] | None = None,
                bodies: FunctionBodies | None = None) -> FieldSamples:
    bindings = dict(bindings or {})
    _check_bound(w, bindings)
    env = _env(sampler, bindings)
    values = {}
    for key in w.chart.keys(w.degree):
        coef = w.coeffs.get(key)
        if coef is None:
            values[key] = np.zeros(sampler.shape())
            continue
        try:
            arr = eval_array(coef, env, bodies, shape=sampler.shape())
        except EvaluationError as exc:
            raise Singularity(f"evaluation singularity inside the box: {exc}") from None
        if not np.all(np.isfinite(arr)):
            raise Singularity("non-finite value inside the box")
        values[key] = arr
    return FieldSamples(sampler.shape(), values)


@dataclass
class FDReport:
    max_rel_err: float
    per_component: dict
    h: float
    flagged: bool
    threshold: float = FLAG_THRESHOLD
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"max_rel_err": self.max_rel_err, "h": self.h, "flagged": self.flagged,
                "threshold": self.threshold,
                "components": {",".join(map(str, k)): v for k, v in sorted(self.per_component.items())}}


def fd_check(w: DForm, sampler: GridSampler, bindings: Mapping[str, float] | None = None,
             bodies: FunctionBodies | None = None, claimed: DForm | None = None,
             threshold: float = FLAG_THRESHOLD) -> FDReport:
    """Compare d(w) (or ``claimed``) with central differences of w's coefficients."""
    bindings = dict(bindings or {})
    bodies = bodies or FunctionBodies()
    _check_bound(w, bindings)
    chart = w.chart
    n = chart.dim
    sym = claimed if claimed is not None else exterior_derivative(w)
    h = sampler.h
    inner = tuple(slice(1, -1) for _ in range(n))
    shape = sampler.shape()
    cache: dict = {}

    def shifted(key, axis, sign):
        ck = (key, axis, sign)
        if ck not in cache:
            coef = w.coeffs.get(key)
            if coef is None:
                cache[ck] = np.zeros(shape)
            else:
                off = [0.0] * n
                off[axis] = sign * h
                try:
                    cache[ck] = eval_array(coef, _env(sampler, bindings, off), bodies, shape=shape)
                except EvaluationError as exc:
                    raise Singularity(f"evaluation singularity inside the box: {exc}") from None
        return cache[ck]

    per = {}
    worst = 0.0
    for key in chart.keys(w.degree + 1):
        partials = []
        fd = np.zeros(shape)
        for i, alpha in enumerate(key):
            rest = key[:i] + key[i + 1:]
            deriv = (shifted(rest, alpha, 1) - shifted(rest, alpha, -1)) / (2 * h)
            partials.append(deriv)
            fd = fd + (deriv if i % 2 == 0 else -deriv)
        coef = sym.coeffs.get(key)
        if coef is None:
            exact = np.zeros(shape)
        else:
            try:
                exact = eval_array(coef, _env(sampler, bindings), bodies, shape=shape)
            except EvaluationError as exc:
                raise Singularity(f"evaluation singularity inside the box: {exc}") from None
        scale = max([float(np.max(np.abs(exact[inner])))] +
                    [float(np.max(np.abs(p[inner]))) for p in partials] + [REL_FLOOR])
        err = float(np.max(np.abs(fd[inner] - exact[inner]))) / scale
        per[key] = err
        worst = max(worst, err)
    return FDReport(worst, per, h, worst > threshold, threshold)


def observed_order(w: DForm, sampler: GridSampler, bindings=None, bodies=None, halvings: int = 1) -> dict:
    """Error at h and h/2 and the observed convergence order log2(e_h / e_h2)."""
    errs = []
    s = sampler
    for _ in range(halvings + 1):
        errs.append(fd_check(w, s, bindings, bodies).max_rel_err)
        s = s.with_h(s.h / 2)
    orders = []
    for a, b in zip(errs, errs[1:]):
        orders.append(math.log2(a / b) if a > 0 and b > 0 else float("inf"))
    return {"errors": errs, "orders": orders, "order": min(orders) if orders else float("nan")}
