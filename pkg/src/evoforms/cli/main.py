"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 internal verification failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..casestudies import CASES, run_case
from ..errors import FormsError, InputError
from ..expr import Domain, FunctionBodies, equals_zero, simplify
from ..forms import (
    DForm,
    closure_classify,
    commutator_with_connection,
    exterior_derivative,
    potential,
)
from ..geometry import levi_civita, metric_closure_report
from ..numerics import GridSampler, fd_check, parameter_bindings
from ..relations import (
    EvolutionaryRelation,
    classify_relation,
    classify_structure,
    degenerate_loci,
    degree_descent,
    factor_expr,
    frobenius_test,
    restrict_relation,
)
from . import report as R
from .workspace import Workspace, _point, load_workspace, parse_locus

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


def _global_options(parser: argparse.ArgumentParser, top: bool) -> None:
    kw = {} if top else {"default": argparse.SUPPRESS}
    parser.add_argument("--json", action="store_true", help="emit the JSON report", **kw)
    parser.add_argument("--verify-numeric", action="store_true", help="attach finite-difference checks", **kw)
    parser.add_argument("--seed", type=int, help="seed for sampling and opaque-function bodies",
                        **({"default": 0} if top else kw))
    parser.add_argument("-w", "--workspace", help="workspace file", **({"default": None} if top else kw))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evoforms", description="Exterior and evolutionary form calculus.")
    _global_options(p, True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, False)
    sub = p.add_subparsers(dest="group", required=True)

    form = sub.add_parser("form", help="operations on a named form").add_subparsers(dest="op", required=True)
    for op in ("d", "closed", "potential", "commutator"):
        q = form.add_parser(op, parents=[common])
        q.add_argument("name")
        if op in ("closed", "potential"):
            q.add_argument("--base", help="base point, e.g. '(1, 1)'")
        if op == "commutator":
            q.add_argument("--connection")

    rel = sub.add_parser("relation", help="operations on a named relation").add_subparsers(dest="op", required=True)
    for op in ("classify", "frobenius", "factor", "loci", "restrict", "descend"):
        q = rel.add_parser(op, parents=[common])
        q.add_argument("name")
        if op == "restrict":
            q.add_argument("--on", required=True, dest="locus",
                           help="'{ x = 0 }' or '(t) -> (l1 = c*t + k, t)'")
        if op == "descend":
            q.add_argument("--base")

    geo = sub.add_parser("geometry", help="connection and metric reports").add_subparsers(dest="op", required=True)
    q = geo.add_parser("report", parents=[common])
    q.add_argument("name")

    q = sub.add_parser("classify", parents=[common], help="structure table lookup")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--n", type=int, required=True)

    q = sub.add_parser("case", parents=[common], help="run a case study")
    q.add_argument("case", choices=sorted(CASES))
    q.add_argument("specfile")
    return p


# --- helpers -----------------------------------------------------------------

def _workspace(args) -> Workspace:
    if not args.workspace:
        raise InputError("this command needs a workspace file (-w FILE)")
    return load_workspace(_read(args.workspace), seed=args.seed)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _base(text: str | None):
    if text is None:
        return None
    return _point(text, 1, 1)


def _status_of(results) -> str:
    statuses = [r.status.value for r in results]
    if all(s == "proved_zero" for s in statuses):
        return "proved_zero"
    return "nonzero" if "nonzero" in statuses else "numerically_zero"


def _numeric(report: dict, name: str, w: DForm, domain: Domain | None, seed: int) -> bool:
    """Attach an fd_check entry; returns True when the check is flagged."""
    if w.degree >= w.chart.dim:
        report["numeric_checks"].append({"name": name, "status": "skipped",
                                         "note": "top-degree form: its derivative vanishes identically"})
        return False
    try:
        domain = domain or Domain.make(coords=w.chart.coords, seed=seed)
        sampler = GridSampler.from_domain(w.chart, domain)
        names = w.free_symbols() - set(w.chart.coords)
        bindings = parameter_bindings(names, seed, domain)
        rep = fd_check(w, sampler, bindings, FunctionBodies(seed=seed))
    except FormsError as exc:
        report["numeric_checks"].append({"name": name, "status": "skipped", "note": str(exc)})
        return False
    entry = {"name": name, "status": "flagged" if rep.flagged else "passed"}
    entry.update(rep.as_dict())
    report["numeric_checks"].append(entry)
    return rep.flagged


def _relation_exprs(report: dict, r: EvolutionaryRelation, prefix: str = "") -> None:
    cls = classify_relation(r)
    R.add_expr(report, prefix + "psi", r.psi)
    R.add_expr(report, prefix + "omega", r.omega)
    R.add_verdict(report, prefix + "relation", cls.status, degree=cls.degree)
    for comp in cls.components:
        R.add_expr(report, prefix + comp.label, comp.total)
        if r.connection is not None:
            R.add_expr(report, prefix + comp.label + ".flat", comp.flat)
            R.add_expr(report, prefix + comp.label + ".connection", comp.connection)
        R.add_verdict(report, prefix + comp.label, comp.status, attribution=comp.attribution or None)


# --- commands ----------------------------------------------------------------

def cmd_form(args, report: dict) -> bool:
    ws = _workspace(args)
    w = ws.lookup("forms", args.name)
    domain = ws.domain(w.chart)
    R.add_expr(report, args.name, w)
    check = w
    if args.op == "d":
        dw = exterior_derivative(w)
        R.add_expr(report, f"d({args.name})", dw)
        statuses = [equals_zero(v, domain) for v in dw.coeffs.values()]
        R.add_verdict(report, f"d({args.name})", _status_of(statuses) if statuses else "proved_zero")
    elif args.op == "closed":
        v = closure_classify(w, _base(args.base), domain)
        R.add_verdict(report, "closure", v.status, note=v.note or None, verification=v.verification or None)
        if v.potential is not None:
            R.add_expr(report, "potential", v.potential)
            R.add_expr(report, "base", "(" + ", ".join(str(b) for b in v.base) + ")")
        if v.status == "unclosed" and v.commutator is not None:
            for key in v.commutator.keys():
                total = simplify(v.commutator.total(key))
                if not total.is_zero:
                    R.add_expr(report, v.commutator.label(key), total)
    elif args.op == "potential":
        chi = potential(w, _base(args.base), domain)
        R.add_expr(report, "potential", chi)
        diffs = exterior_derivative(chi) - w
        statuses = [equals_zero(v, domain) for v in diffs.coeffs.values()]
        R.add_verdict(report, "d(potential) - form", _status_of(statuses) if statuses else "proved_zero")
    else:
        conn = ws.lookup("connections", args.connection) if args.connection else None
        k = commutator_with_connection(w, conn)
        for key in k.keys():
            lab = k.label(key)
            R.add_expr(report, lab, k.total(key))
            R.add_expr(report, lab + ".flat", k.flat(key))
            R.add_expr(report, lab + ".connection", k.connection(key))
            R.add_verdict(report, lab, equals_zero(k.total(key), domain).status)
    if args.verify_numeric:
        return _numeric(report, args.name, check, domain, args.seed)
    return False


def cmd_relation(args, report: dict) -> bool:
    ws = _workspace(args)
    if args.op == "frobenius":
        kind, obj = ws.find(args.name, "relations", "forms")
        omega = obj.omega if kind == "relations" else obj
        res = frobenius_test(omega, ws.domain(omega.chart))
        R.add_expr(report, "omega", omega)
        R.add_expr(report, "omega^d(omega)", res.witness)
        R.add_verdict(report, "frobenius", res.verdict, note=res.note or None)
        if args.verify_numeric:
            return _numeric(report, args.name, omega, ws.domain(omega.chart), args.seed)
        return False
    r = ws.lookup("relations", args.name)
    if args.op == "classify":
        _relation_exprs(report, r)
    elif args.op == "factor":
        cls = classify_relation(r)
        R.add_verdict(report, "relation", cls.status)
        for comp in cls.nonzero():
            factors, dropped = factor_expr(comp.total, r.chart.coords)
            R.add_expr(report, comp.label, comp.total)
            R.add_expr(report, f"factors[{comp.label}]",
                       " * ".join(f"({f})" + (f"^{m}" if m != 1 else "") for f, m in factors) or "1")
            if dropped:
                R.add_verdict(report, f"dropped[{comp.label}]", "nonvanishing",
                              factors=[f"{f} ({why})" for f, why in dropped])
    elif args.op == "loci":
        ps = degenerate_loci(r)
        R.add_verdict(report, "pseudostructure", "empty" if ps.empty else "found",
                      constraints=len(ps.constraints))
        for i, con in enumerate(ps.constraints, start=1):
            R.add_expr(report, f"constraint[{i}]", f"{con.expr} = 0")
            if con.parametrization is not None:
                R.add_expr(report, f"parametrization[{i}]", con.parametrization)
            R.add_verdict(report, f"constraint[{i}]", "verified" if con.verified else "unparametrized",
                          sources=con.sources, multiplicity=con.multiplicity if con.multiplicity != 1 else None,
                          note=con.note or None)
        for ev in ps.evidence:
            entry = {"name": f"grid {ev['component']}", "status": "passed"}
            entry.update({k: v for k, v in ev.items() if k != "component"})
            report["numeric_checks"].append(entry)
        if ps.direction is not None:
            R.add_expr(report, "direction_ratio", ps.direction.ratio)
            if ps.direction.family is not None:
                R.add_expr(report, "characteristic", ps.direction.family)
                R.add_verdict(report, "characteristic", "identical" if ps.direction.verified else "nonidentical")
    elif args.op == "restrict":
        how = "on" if args.locus.strip().startswith("{") else "along"
        phi = parse_locus(how, args.locus, r.chart)
        out = restrict_relation(r, phi)
        R.add_expr(report, "map", phi)
        _relation_exprs(report, out, prefix="restricted.")
    else:
        desc = degree_descent(r, _base(args.base))
        for step in desc.steps:
            label = f"step[{step.degree}]"
            if step.potential is not None:
                R.add_expr(report, label, step.potential)
            R.add_verdict(report, label, step.status, note=step.note or None)
        R.add_verdict(report, "descent", "k=0" if desc.reached_zero else "halted",
                      final_degree=desc.final_degree, reason=desc.halted or None)
    if args.verify_numeric:
        return _numeric(report, args.name, r.omega, r.domain, args.seed)
    return False


def cmd_geometry(args, report: dict) -> bool:
    ws = _workspace(args)
    kind, obj = ws.find(args.name, "connections", "metrics")
    metric = None
    domain = ws.domain(obj.chart)
    if kind == "metrics":
        metric = obj
        g = levi_civita(metric, domain)
        R.add_expr(report, "det", metric.det())
    else:
        g = obj
    for (r_, m_, n_), v in g.components.items():
        R.add_expr(report, g.label(r_, m_, n_), v)
    rep = metric_closure_report(g, metric, domain)
    for deg, info in (("degree0", rep.degree0), ("degree1", rep.degree1), ("degree2", rep.degree2),
                      ("degree3", rep.degree3)):
        R.add_verdict(report, f"commutator.{deg}", info["status"],
                      **{k: v for k, v in info.items() if k != "status"})
    c = g.chart.coords
    for (r_, m_, n_), v in sorted(rep.torsion.items()):
        R.add_expr(report, f"T[{c[r_]}][{c[m_]}][{c[n_]}]", v)
    for (r_, s_, m_, n_), v in sorted(rep.curvature.components.items()):
        R.add_expr(report, rep.curvature.label(r_, s_, m_, n_), v)
    R.add_verdict(report, "classification", rep.classification)
    if args.verify_numeric:
        report["warnings"].append("--verify-numeric has no form to check for geometry reports")
    return False


def cmd_classify(args, report: dict) -> bool:
    s = classify_structure(args.p, args.k, args.n)
    report.update(s.as_dict())
    R.add_verdict(report, "structure", s.interaction, p=s.p, k=s.k, n=s.n)
    return False


_CASE_FORMS = {"thermo": "omega", "gas": "omega", "em": "omega", "maxwell": "theta", "hamiltonian": "theta"}


def cmd_case(args, report: dict) -> bool:
    rep = run_case(args.case, _read(args.specfile))
    report["verdicts"].extend(R.jsonable(rep.verdicts))
    report["expressions"].update(rep.expressions)
    report["warnings"].extend(rep.warnings)
    if args.verify_numeric:
        w = rep.objects.get(_CASE_FORMS[args.case])
        if w is not None:
            return _numeric(report, _CASE_FORMS[args.case], w, None, args.seed)
    return False


COMMANDS = {"form": cmd_form, "relation": cmd_relation, "geometry": cmd_geometry,
            "classify": cmd_classify, "case": cmd_case}


def _command_line(args) -> tuple:
    if args.group == "classify":
        return "classify", {"p": args.p, "k": args.k, "n": args.n}
    if args.group == "case":
        return f"case {args.case}", {"specfile": args.specfile}
    inputs = {"name": args.name, "workspace": args.workspace}
    for key in ("base", "connection", "locus"):
        if getattr(args, key, None) is not None:
            inputs[key] = getattr(args, key)
    return f"{args.group} {args.op}", inputs


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    command, inputs = _command_line(args)
    inputs["seed"] = args.seed
    report = R.new_report(command, inputs)
    code = EXIT_OK
    try:
        if COMMANDS[args.group](args, report):
            code = EXIT_INTERNAL
            report["warnings"].append("numeric cross-check flagged a disagreement")
    except InputError as exc:
        code = EXIT_INPUT
        report["error"] = str(exc)
    except FormsError as exc:
        code = EXIT_INTERNAL
        report["error"] = str(exc)
    except RecursionError:
        code = EXIT_INTERNAL
        report["error"] = "internal error: recursion limit reached"
    if "error" in report:
        print(f"evoforms: error: {report['error']}", file=err)
    out.write(R.to_json(report) if args.json else R.to_text(report))
    return code


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
