"""Acceptance suite: one test per criterion, each recording a pass/fail line."""
from __future__ import annotations

import io
import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import sympy as sp

from formgen import CHARTS, cases, random_connection_components, random_field, random_form, random_map, random_poly
from golden import GOLDEN
from oracles import christoffel, riemann, same
from evoforms.casestudies import EMSpec, FlowSpec, HamiltonianSpec, em_poynting, gasdyn_relation, hamiltonian_check
from evoforms.casestudies import run_case, thermo_ideal_gas
from evoforms.cli import run
from evoforms.expr import Domain, ZeroStatus, equals_zero, exp, parse_expr, to_string
from evoforms.forms import (
    Chart,
    DForm,
    closure_classify,
    commutator_with_connection,
    exterior_derivative,
    interior_product,
    parse_form,
    potential,
    pullback,
    wedge,
)
from evoforms.geometry import Connection, Metric, curvature, levi_civita
from evoforms.numerics import GridSampler, fd_check, observed_order, parameter_bindings
from evoforms.relations import (
    IDENTICAL,
    build_relation,
    classify_structure,
    degenerate_loci,
    find_integrating_factor,
    frobenius_test,
    restrict_relation,
)

PROVED = ZeroStatus.PROVED_ZERO
HERE = Path(__file__).parent


def proved_zero(w: DForm) -> bool:
    return all(equals_zero(v).status is PROVED for v in w.coeffs.values())


def test_c01_algebraic_identities(criterion):
    start = time.perf_counter()
    counts = dict.fromkeys(["d∘d", "anticommutativity", "Leibniz", "interior anti-derivation", "pullback-d"], 0)
    failures = []

    for rng, chart in cases(1, 100):
        p = rng.randrange(chart.dim)
        w = random_form(rng, chart, p)
        counts["d∘d"] += 1
        if not proved_zero(exterior_derivative(exterior_derivative(w))):
            failures.append(("d∘d", str(w)))

    for rng, chart in cases(2, 100):
        p, q = rng.randrange(chart.dim + 1), rng.randrange(chart.dim + 1)
        a, b = random_form(rng, chart, p), random_form(rng, chart, q)
        counts["anticommutativity"] += 1
        if not proved_zero(wedge(a, b) - wedge(b, a) * (-1) ** (p * q)):
            failures.append(("anticommutativity", str(a), str(b)))

    for rng, chart in cases(3, 100):
        p, q = rng.randrange(chart.dim), rng.randrange(chart.dim)
        a, b = random_form(rng, chart, p), random_form(rng, chart, q)
        lhs = exterior_derivative(wedge(a, b))
        rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)) * (-1) ** p
        counts["Leibniz"] += 1
        if not proved_zero(lhs - rhs):
            failures.append(("Leibniz", str(a), str(b)))

    for rng, chart in cases(4, 100):
        p, q = rng.randrange(1, chart.dim + 1), rng.randrange(chart.dim + 1)
        a, b = random_form(rng, chart, p), random_form(rng, chart, q)
        X = random_field(rng, chart)
        lhs = interior_product(X, wedge(a, b))
        rhs = wedge(interior_product(X, a), b)
        if q:  # i_X of a function is zero
            rhs = rhs + wedge(a, interior_product(X, b)) * (-1) ** p
        counts["interior anti-derivation"] += 1
        if not proved_zero(lhs - rhs):
            failures.append(("interior", str(a), str(b)))

    rng = random.Random(5)
    for i in range(100):
        target = CHARTS[2 + i % 3]
        source = CHARTS[2 + (i // 3) % 3]
        phi = random_map(rng, source, target)
        w = random_form(rng, target, rng.randrange(target.dim), terms=2)
        counts["pullback-d"] += 1
        if not proved_zero(pullback(phi, exterior_derivative(w)) - exterior_derivative(pullback(phi, w))):
            failures.append(("pullback", str(w)))

    elapsed = time.perf_counter() - start
    detail = ", ".join(f"{k} x{v}" for k, v in counts.items())
    ok = not failures and min(counts.values()) >= 100 and elapsed < 60
    criterion(1, ok, f"{detail}; all proved_zero={not failures}; {elapsed:.1f} s (< 60 s)")


def test_c02_commutator_decomposition(criterion):
    rng = random.Random(7)
    exact = symmetric_ok = 0
    for i in range(20):
        chart = CHARTS[2 + i % 3]
        symmetric = i % 2 == 0
        conn = Connection(chart, random_connection_components(rng, chart, symmetric))
        p = 1 if i < 10 else rng.randrange(1, chart.dim)
        w = random_form(rng, chart, p, density=1.0, terms=2)
        k = commutator_with_connection(w, conn)
        flat = exterior_derivative(w)
        good = True
        for key in chart.keys(p + 1):
            total = k.total(key) if key in k.entries else parse_expr("0")
            good &= (total - k.flat(key) - k.connection(key)).is_zero if key in k.entries else True
            good &= (k.flat(key) - flat.coeffs.get(key, parse_expr("0"))).is_zero if key in k.entries else \
                flat.coeffs.get(key) is None
            if p == 1 and key in k.entries:
                a, b = key
                ref = sum((conn.component(s, b, a) - conn.component(s, a, b)) * w[(s,)]
                          for s in range(chart.dim))
                good &= (k.connection(key) - ref).is_zero
        exact += good
        if symmetric:
            symmetric_ok += all(equals_zero(k.connection(key)).status is PROVED for key in k.entries)
    criterion(2, exact == 20 and symmetric_ok == 10,
              f"{exact}/20 pairs total = flat + connection exactly; "
              f"{symmetric_ok}/10 symmetric connections give proved_zero connection parts")


def test_c03_thermodynamics(criterion):
    start = time.perf_counter()
    rep = thermo_ideal_gas()
    elapsed = time.perf_counter() - start
    ex = rep.expressions
    T, V = parse_expr("T"), parse_expr("V")
    S = rep.objects["entropy"].value
    omega = rep.objects["omega"]
    check = exterior_derivative(DForm.scalar(omega.chart, S)) - omega / T
    ok = (rep.status_of("relation") == "nonidentical" and ex["K[T,V]"] == "R/V"
          and ex["integrating_factor"] == "1/T"
          and equals_zero(S - parse_expr("c_v*ln(T) + R*ln(V)")).status is PROVED
          and proved_zero(check) and elapsed < 5)
    criterion(3, ok, f"K[T,V] = {ex['K[T,V]']}, mu = {ex['integrating_factor']}, S = {ex['entropy']}, "
                     f"d(S) - omega/T proved_zero={proved_zero(check)}; {elapsed:.2f} s (< 5 s)")


def test_c04_frobenius(criterion):
    xyz = CHARTS[3]
    contact = frobenius_test(parse_form("dz - y*dx", xyz))
    contact_ok = not contact.integrable and contact.witness == parse_form("dx^dy^dz", xyz)

    rng = random.Random(11)
    closed_ok = 0
    for i in range(20):
        chart = CHARTS[2 + i % 3]
        w = exterior_derivative(random_form(rng, chart, 0, density=1.0, terms=3, degree=3))
        closed_ok += frobenius_test(w).integrable
    two_ok = 0
    for _ in range(20):
        w = random_form(rng, CHARTS[2], 1, density=1.0)
        two_ok += frobenius_test(w).integrable
    invariant = 0
    for i in range(20):
        chart = CHARTS[3 + i % 2]
        if i % 2:
            h = random_poly(rng, chart.coords, terms=2, degree=2)
            w = exterior_derivative(DForm.scalar(chart, h)) * random_poly(rng, chart.coords, terms=2, degree=1)
        else:
            w = random_form(rng, chart, 1, density=1.0, terms=2, degree=1)
        f = (1 + parse_expr("x")**2) * exp(random_poly(rng, chart.coords, terms=2, degree=1))
        invariant += frobenius_test(w).integrable == frobenius_test(w * f).integrable
    ok = contact_ok and closed_ok == 20 and two_ok == 20 and invariant == 20
    criterion(4, ok, f"contact rejected with witness {contact.witness}; closed accepted {closed_ok}/20; "
                     f"2-chart accepted {two_ok}/20; rescaling invariant {invariant}/20")


def test_c05_potentials(criterion):
    rng = random.Random(13)
    good = 0
    for i in range(50):
        chart = CHARTS[2 + i % 3]
        p = 1 + i % chart.dim
        w = exterior_derivative(random_form(rng, chart, p - 1, density=1.0))
        if w.is_zero:
            w = exterior_derivative(DForm.scalar(chart, parse_expr("x^2*y"))) if p == 1 else w
        try:
            chi = potential(w)
            good += exterior_derivative(chi) == w
        except Exception:
            pass
    xy = CHARTS[2]
    dom = Domain.make({"x": (-1, 1), "y": (-1, 1)}, coords=xy.coords, exclude=[(0, 0)])
    v = closure_classify(parse_form("(x*dy - y*dx)/(x^2 + y^2)", xy), domain=dom)
    ok = good == 50 and v.status == "closed_potential_not_found" and bool(v.note)
    criterion(5, ok, f"{good}/50 exact forms round-trip; winding form -> {v.status} ({v.note})")


def test_c06_geometry(criterion):
    sphere = Chart(["theta", "phi"])
    g = levi_civita(Metric.diag(sphere, [1, parse_expr("sin(theta)^2")]))
    R = curvature(g)
    frozen = (to_string(g.component(0, 1, 1)) == "-cos(theta)*sin(theta)"
              and to_string(R.component(0, 1, 0, 1)) == "sin(theta)^2")
    th, ph = sp.symbols("theta phi", positive=True)
    gamma = christoffel(sp.diag(1, sp.sin(th) ** 2), [th, ph])
    oracle_ok = all(same(g.component(*k), v) for k, v in gamma.items())
    oracle_ok &= all(same(R.component(*k), v) for k, v in riemann(gamma, [th, ph]).items())
    flats = [
        Metric.diag(Chart(["x", "y", "z"]), [1, 1, 1]),
        Metric.diag(Chart(["r", "theta"]), [1, parse_expr("r^2")]),
        Metric.diag(Chart(["r", "theta", "phi"]), [1, parse_expr("r^2"), parse_expr("r^2*sin(theta)^2")]),
        Metric.diag(Chart(["t", "x"]), [-1, 1]),
    ]
    flat_ok = all(all(equals_zero(v).status is PROVED for v in curvature(levi_civita(m)).components.values())
                  for m in flats)
    criterion(6, frozen and oracle_ok and flat_ok,
              f"G^theta_phiphi = {g.component(0, 1, 1)}, R^theta_phithetaphi = {R.component(0, 1, 0, 1)}; "
              f"oracle agreement={oracle_ok}; flat metrics proved_zero={flat_ok}")


def test_c07_restriction_soundness(criterion):
    xy = CHARTS[2]
    relations = [build_relation(None, parse_form(t, xy, 1)) for t in
                 ["x*y*dx", "(x - 1)*(y + 2)*x*dy", "x^2*y*dy + y*dx", "(x + y)*dx", "x*y*dx + (y - 3)*x^2*dy"]]
    rng = random.Random(17)
    for _ in range(10):
        a, b = rng.choice([1, 2, -1]), rng.randrange(-3, 4)
        factor = parse_expr(f"{a}*x + {b}*y - {rng.randrange(1, 4)}")
        other = random_poly(rng, ("x", "y"), terms=2, degree=2)
        relations.append(build_relation(None, DForm.one_form(xy, [factor * other, factor * parse_expr("y")])))
    emitted = restricted_ok = 0
    for r in relations:
        for con in degenerate_loci(r).parametrized():
            emitted += 1
            restricted_ok += restrict_relation(r, con.parametrization).status == IDENTICAL
    em = em_poynting(EMSpec())
    direction = em.objects["direction"]
    emitted += 1
    restricted_ok += restrict_relation(em.objects["relation"], direction.family).status == IDENTICAL
    xdx = degenerate_loci(relations[0]).constraints[0]
    ok = emitted == restricted_ok and str(xdx.parametrization) == "(y) -> (x = 0, y = y)" and emitted >= 3
    criterion(7, ok, f"{restricted_ok}/{emitted} parametrized pseudostructures restrict to identical "
                     f"(x*y*dx -> {xdx.parametrization}; characteristic {direction.family})")


def test_c08_em_case(criterion):
    vac = em_poynting(EMSpec())
    ratio = vac.objects["direction"].ratio
    src = em_poynting(EMSpec(Q_e=parse_expr("Q_e"), Q_i=parse_expr("Q_i")))
    ok = (ratio - parse_expr("c")).is_zero and src.expressions["residual"] == "Q_e*dt + Q_i*dl1"
    criterion(8, ok, f"direction ratio = {ratio}; residual = {src.expressions['residual']}; "
                     f"discrete condition {src.expressions['discrete_condition']}")


TABLE = {0: "strong", 1: "weak", 2: "electromagnetic", 3: "gravitation"}


def test_c09_structure_table(criterion):
    pairs = [(p, k) for p in range(4) for k in range(p + 1)]
    good = 0
    for p, k in pairs:
        s = classify_structure(p, k, 3)
        good += s.interaction == TABLE[k] and s.pseudostructure_dim == 4 - k and s.metric_dim == 4
    criterion(9, len(pairs) == 10 and good == 10, f"{good}/{len(pairs)} (p, k) pairs match the table and n+1-k")


def test_c10_numeric_cross_validation(criterion):
    forms = {
        "thermo": thermo_ideal_gas().objects["omega"],
        "gas shear": gasdyn_relation(FlowSpec(coords=("x", "y"), U=(parse_expr("u(y)"), 0))).objects["omega"],
        "gas nonideal": gasdyn_relation(FlowSpec(coords=("x", "y"), U=(0, parse_expr("x*t")),
                                                 transport=parse_expr("x*y"))).objects["omega"],
        "hamiltonian": hamiltonian_check(HamiltonianSpec()).objects["theta"],
        "pendulum": hamiltonian_check(HamiltonianSpec(H=parse_expr("p^2/2 - cos(q)"))).objects["theta"],
    }
    worst = 0.0
    for w in forms.values():
        names = w.free_symbols() - set(w.chart.coords)
        sampler = GridSampler.from_domain(w.chart, Domain.make(), points=5, h=1e-3)
        worst = max(worst, fd_check(w, sampler, parameter_bindings(names)).max_rel_err)

    smooth = [forms["pendulum"], parse_form("exp(x)*sin(y)*dx + x^3*cos(y)*dy", CHARTS[2]),
              parse_form("sin(x*y)*dx + cos(x + y^2)*dy", CHARTS[2])]
    orders = []
    for w in smooth:
        names = w.free_symbols() - set(w.chart.coords)
        sampler = GridSampler.from_domain(w.chart, Domain.make(), points=5, h=1e-2)
        res = observed_order(w, sampler, parameter_bindings(names), halvings=2)
        orders.append(res["orders"])
    order_ok = all(o[-1] >= 1.99 and o[-1] >= o[0] - 1e-9 for o in orders)

    w = forms["pendulum"]
    sampler = GridSampler.from_domain(w.chart, Domain.make(), points=5, h=1e-3)
    mutation = fd_check(w, sampler, claimed=-exterior_derivative(w))
    ok = worst <= 1e-5 and order_ok and mutation.flagged and mutation.max_rel_err >= 1e-2
    criterion(10, ok, f"max_rel_err {worst:.2e} (<= 1e-5 at h=1e-3); observed orders "
                      f"{', '.join(f'{o[-1]:.7f}' for o in orders)} (approaching 2 from below, >= 1.99); "
                      f"mutation error {mutation.max_rel_err:.2f} flagged={mutation.flagged}")


def test_c11_cli_determinism(criterion):
    runs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, str(HERE / "golden.py")], capture_output=True, text=True,
                              env=env, check=True, cwd=HERE)
        runs.append(json.loads(proc.stdout))
    identical = sum(runs[0][k] == runs[1].get(k) and runs[0][k][0] == 0 for k in runs[0])
    codes = {
        "ok": run(["classify", "--p", "3", "--k", "3", "--n", "3"], out=io.StringIO(), err=io.StringIO()),
        "unknown name": run(["form", "closed", "missing_name", "-w", GOLDEN[0][-1]], out=io.StringIO(),
                            err=io.StringIO()),
        "bad table entry": run(["classify", "--p", "1", "--k", "2", "--n", "1"], out=io.StringIO(),
                               err=io.StringIO()),
    }
    buf = io.StringIO()
    run(["--json", "classify", "--p", "3", "--k", "3", "--n", "3"], out=buf, err=io.StringIO())
    head = {k: json.loads(buf.getvalue())[k] for k in ("interaction", "pseudostructure_dim", "metric_dim")}
    ok = (identical == len(GOLDEN) and codes == {"ok": 0, "unknown name": 2, "bad table entry": 2}
          and head == {"interaction": "gravitation", "pseudostructure_dim": 1, "metric_dim": 4})
    criterion(11, ok, f"{identical}/{len(GOLDEN)} golden commands byte-identical across two processes "
                       f"(PYTHONHASHSEED 1 vs 2) with exit 0; exit codes {codes}")
