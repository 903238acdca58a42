"""Fixed-seed random polynomial forms, connections and maps for the tests."""
from __future__ import annotations

import random
from itertools import combinations_with_replacement

from evoforms.expr import ZERO, Expr
from evoforms.forms import Chart, DForm, ParamMap, VectorField

CHARTS = {2: Chart(["x", "y"]), 3: Chart(["x", "y", "z"]), 4: Chart(["x", "y", "z", "w"])}


def random_poly(rng: random.Random, names, terms: int = 3, degree: int = 2) -> Expr:
    out = ZERO
    monos = [m for d in range(degree + 1) for m in combinations_with_replacement(names, d)]
    for mono in rng.sample(monos, min(terms, len(monos))):
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        term = Expr.num(c)
        for v in mono:
            term = term * Expr.sym(v)
        out = out + term
    return out


def random_form(rng: random.Random, chart: Chart, p: int, density: float = 0.7, **kw) -> DForm:
    coeffs = {}
    for key in chart.keys(p):
        if rng.random() < density:
            coeffs[key] = random_poly(rng, chart.coords, **kw)
    return DForm(chart, p, coeffs)


def random_field(rng: random.Random, chart: Chart) -> VectorField:
    return VectorField(chart, [random_poly(rng, chart.coords, terms=2, degree=1) for _ in chart.coords])


def random_map(rng: random.Random, source: Chart, target: Chart) -> ParamMap:
    return ParamMap(source, target, [random_poly(rng, source.coords, terms=2, degree=2) for _ in target.coords])


def random_connection_components(rng: random.Random, chart: Chart, symmetric: bool, count: int = 4) -> dict:
    n = chart.dim
    comps = {}
    for _ in range(count):
        r, m, k = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        v = random_poly(rng, chart.coords, terms=2, degree=1)
        comps[(r, m, k)] = v
        if symmetric:
            comps[(r, k, m)] = v
    return comps


def cases(seed: int, count: int):
    """(rng, chart) pairs cycling through dimensions 2, 3, 4."""
    rng = random.Random(seed)
    for i in range(count):
        yield rng, CHARTS[2 + i % 3]
