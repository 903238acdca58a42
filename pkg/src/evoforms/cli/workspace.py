"""Workspace files: a line-oriented statement language.

    chart (x, y)                     # or: chart polar (r, theta)
    domain box x in [-1, 1], y in [-1, 1] exclude (0, 0) base (1, 1)
    form w : 1 = 2*x*y*dx + x^2*dy
    connection G { G[x][y][x] = 1; G[y][x][x] = -1 }
    connection L = christoffel(g)
    metric g = diag(1, sin(theta)^2)
    metric h = [[1, 0], [0, r^2]]
    relation r : d(psi) = w with G  # d(_) stands for a fresh unknown
    restrict r on { x = 0 } as r0
    restrict r along (t) -> (l1 = c*t + k, t)

Names are resolved when their statement is read, so a statement may only use
names declared above it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ChartMismatch, ConfigurationError, ParseError, UnknownName
from ..expr import Domain, Expr, parse_expr, subs
from ..forms import Chart, DForm, ParamMap, parse_form
from ..geometry import Connection, Metric, levi_civita
from ..relations import EvolutionaryRelation, build_relation, fresh_unknown, restrict_relation
from ..relations.loci import _solve_linear_coordinate
from ..casestudies.common import split_tuple

IDENT = r"[A-Za-z_][A-Za-z0-9_']*"


@dataclass
class Workspace:
    charts: dict = field(default_factory=dict)
    domains: dict = field(default_factory=dict)  # chart name -> Domain
    forms: dict = field(default_factory=dict)
    connections: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    chart_of: dict = field(default_factory=dict)  # object name -> chart name
    seed: int = 0

    def domain(self, chart: Chart) -> Domain:
        for name, c in self.charts.items():
            if c == chart and name in self.domains:
                return self.domains[name].with_seed(self.seed)
        return Domain.make(coords=chart.coords, seed=self.seed)

    def lookup(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise UnknownName(f"unknown {kind[:-1]} {name!r}")
        return table[name]

    def find(self, name: str, *kinds: str):
        for kind in kinds:
            table = getattr(self, kind)
            if name in table:
                return kind, table[name]
        raise UnknownName(f"unknown name {name!r} (looked for a {' or '.join(k[:-1] for k in kinds)})")


def _statements(text: str):
    """Yield (line, col, text) per statement; braces may span lines."""
    buf, start = "", None
    depth = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip() and depth == 0:
            continue
        if depth == 0:
            start = (lineno, len(line) - len(line.lstrip()) + 1)
            buf = line.strip()
        else:
            buf += "; " + line.strip()
        depth += line.count("{") - line.count("}")
        if depth < 0:
            raise ParseError("unbalanced brace", lineno, 1)
        if depth == 0:
            yield start[0], start[1], buf
    if depth:
        raise ParseError("unbalanced brace", start[0], start[1])


def _number(text: str, line: int, col: int):
    e = parse_expr(text, line, col)
    if not e.is_number:
        raise ParseError(f"expected a number, got {text!r}", line, col)
    return e.as_number()


def _point(text: str, line: int, col: int) -> tuple:
    return tuple(_number(p, line, col) for p in split_tuple(text))


class WorkspaceParser:
    def __init__(self, seed: int = 0):
        self.ws = Workspace(seed=seed)
        self.current: str | None = None

    def chart(self, line: int) -> tuple:
        if self.current is None:
            raise ParseError("no chart declared yet", line, 1)
        return self.current, self.ws.charts[self.current]

    def _unique(self, kind: str, name: str, line: int, col: int) -> None:
        if name in getattr(self.ws, kind):
            raise ParseError(f"duplicate {kind[:-1]} name {name!r}", line, col)

    def parse(self, text: str) -> Workspace:
        handlers = {
            "chart": self.s_chart, "domain": self.s_domain, "form": self.s_form,
            "connection": self.s_connection, "metric": self.s_metric, "relation": self.s_relation,
            "restrict": self.s_restrict,
        }
        for line, col, stmt in _statements(text):
            head = stmt.split(None, 1)[0]
            if head not in handlers:
                raise ParseError(f"unknown statement {head!r}", line, col)
            rest = stmt[len(head):].strip()
            handlers[head](rest, line, col + len(stmt) - len(rest))
        return self.ws

    def s_chart(self, rest: str, line: int, col: int) -> None:
        m = re.fullmatch(rf"(?:({IDENT})\s*)?\((.*)\)", rest)
        if not m:
            raise ParseError("expected 'chart [name] (x, y, ...)'", line, col)
        name = m.group(1) or f"chart{len(self.ws.charts) + 1}"
        coords = [c.strip() for c in m.group(2).split(",")]
        if not all(re.fullmatch(IDENT, c) for c in coords):
            raise ParseError("chart coordinates must be identifiers", line, col)
        self._unique("charts", name, line, col)
        self.ws.charts[name] = Chart(coords)
        self.current = name

    def s_domain(self, rest: str, line: int, col: int) -> None:
        cname, chart = self.chart(line)
        m = re.fullmatch(r"box\s+(.*?)(?:\s+exclude\s+(.*?))?(?:\s+base\s+(\(.*\)))?", rest)
        if not m:
            raise ParseError("expected 'domain box x in [a, b], ...'", line, col)
        box = {}
        for part in re.findall(rf"({IDENT})\s+in\s+\[([^\]]*)\]", m.group(1)):
            lo, hi = part[1].split(",")
            box[part[0]] = (_number(lo, line, col), _number(hi, line, col))
        if not box:
            raise ParseError("domain box declares no intervals", line, col)
        exclude = []
        if m.group(2):
            for pt in re.findall(r"\(([^)]*)\)", m.group(2)):
                p = _point(pt, line, col)
                if len(p) != chart.dim:
                    raise ParseError(f"excluded point needs {chart.dim} coordinates", line, col)
                exclude.append(p)
        base = None
        if m.group(3):
            base = _point(m.group(3), line, col)
            if len(base) != chart.dim:
                raise ParseError(f"base point needs {chart.dim} coordinates", line, col)
        self.ws.domains[cname] = Domain.make(box, chart.coords, exclude, base)

    def s_form(self, rest: str, line: int, col: int) -> None:
        cname, chart = self.chart(line)
        m = re.fullmatch(rf"({IDENT})\s*(?::\s*(\d+)\s*)?=\s*(.+)", rest)
        if not m:
            raise ParseError("expected 'form name : degree = expression'", line, col)
        name = m.group(1)
        self._unique("forms", name, line, col)
        degree = int(m.group(2)) if m.group(2) else None
        body = m.group(3)
        w = parse_form(body, chart, degree, line, col + rest.index(body, m.start(3)))
        self.ws.forms[name] = w
        self.ws.chart_of[name] = cname

    def s_connection(self, rest: str, line: int, col: int) -> None:
        cname, chart = self.chart(line)
        m = re.fullmatch(rf"({IDENT})\s*=\s*christoffel\(\s*({IDENT})\s*\)", rest)
        if m:
            name = m.group(1)
            self._unique("connections", name, line, col)
            metric = self._get("metrics", m.group(2), line, col)
            self.ws.connections[name] = levi_civita(metric, self.ws.domain(metric.chart))
            return
        m = re.fullmatch(rf"({IDENT})\s*\{{(.*)\}}", rest)
        if not m:
            raise ParseError("expected 'connection G { G[x][y][z] = expr; ... }'", line, col)
        name = m.group(1)
        self._unique("connections", name, line, col)
        comps = {}
        for entry in m.group(2).split(";"):
            entry = entry.strip()
            if not entry:
                continue
            em = re.fullmatch(rf"({IDENT})\[({IDENT})\]\[({IDENT})\]\[({IDENT})\]\s*=\s*(.+)", entry)
            if not em or em.group(1) != name:
                raise ParseError(f"bad connection entry {entry!r}", line, col)
            idx = em.group(2, 3, 4)
            for c in idx:
                if c not in chart.coords:
                    raise ParseError(f"{c!r} is not a coordinate of chart {chart}", line, col)
            if idx in comps:
                raise ParseError(f"component {entry.split('=')[0].strip()} given twice", line, col)
            comps[idx] = parse_expr(em.group(5), line, col)
        self.ws.connections[name] = Connection(chart, comps)
        self.ws.chart_of[name] = cname

    def s_metric(self, rest: str, line: int, col: int) -> None:
        cname, chart = self.chart(line)
        m = re.fullmatch(rf"({IDENT})\s*=\s*(.+)", rest)
        if not m:
            raise ParseError("expected 'metric g = diag(...)' or 'metric g = [[...], ...]'", line, col)
        name, body = m.group(1), m.group(2).strip()
        self._unique("metrics", name, line, col)
        if body.startswith("diag(") and body.endswith(")"):
            entries = [parse_expr(p, line, col) for p in split_tuple(body[4:])]
            if len(entries) != chart.dim:
                raise ParseError(f"diag needs {chart.dim} entries", line, col)
            metric = Metric.diag(chart, entries)
        elif body.startswith("[") and body.endswith("]"):
            rows = [split_tuple("(" + r + ")") for r in re.findall(r"\[([^\[\]]*)\]", body[1:-1])]
            metric = Metric(chart, [[parse_expr(x, line, col) for x in row] for row in rows])
        else:
            raise ParseError("metric must be diag(...) or a [[...]] matrix", line, col)
        self.ws.metrics[name] = metric
        self.ws.chart_of[name] = cname

    def _get(self, kind: str, name: str, line: int, col: int):
        try:
            return self.ws.lookup(kind, name)
        except UnknownName as exc:
            raise UnknownName(f"{exc} (line {line}, column {col})") from None

    def s_relation(self, rest: str, line: int, col: int) -> None:
        m = re.fullmatch(rf"({IDENT})\s*:\s*d\(\s*({IDENT})\s*\)\s*=\s*(.+?)(?:\s+with\s+({IDENT}))?", rest)
        if not m:
            raise ParseError("expected 'relation r : d(psi) = omega [with G]'", line, col)
        name, psi_name, rhs, conn_name = m.groups()
        self._unique("relations", name, line, col)
        if re.fullmatch(IDENT, rhs.strip()):
            omega = self._get("forms", rhs.strip(), line, col)
        else:
            omega = parse_form(rhs, self.chart(line)[1], None, line, col)
        if psi_name == "_":
            psi = None
        else:
            psi = self._get("forms", psi_name, line, col)
        connection = self._get("connections", conn_name, line, col) if conn_name else None
        if connection is not None and connection.chart != omega.chart:
            raise ChartMismatch(f"connection {conn_name} lives on another chart (line {line})")
        domain = self.ws.domain(omega.chart)
        self.ws.relations[name] = build_relation(psi, omega, connection, domain, name=name)

    def s_restrict(self, rest: str, line: int, col: int) -> None:
        m = re.fullmatch(rf"({IDENT})\s+(on|along)\s+(.+?)(?:\s+as\s+({IDENT}))?", rest)
        if not m:
            raise ParseError("expected 'restrict r on {...}' or 'restrict r along (s) -> (...)'", line, col)
        rname, how, locus, alias = m.groups()
        r = self._get("relations", rname, line, col)
        alias = alias or f"{rname}_restricted"
        self._unique("relations", alias, line, col)
        phi = parse_locus(how, locus, r.chart, line, col)
        out = restrict_relation(r, phi)
        out.name = alias
        self.ws.relations[alias] = out


def parse_locus(how: str, text: str, chart: Chart, line: int = 1, col: int = 1) -> ParamMap:
    """``on { h = 0, ... }`` or ``along (s, ...) -> (x = f(s), y, ...)``."""
    text = text.strip()
    if how == "on":
        if not (text.startswith("{") and text.endswith("}")):
            raise ParseError("a locus is written { lhs = rhs, ... }", line, col)
        eqs = []
        for part in split_tuple(text[1:-1]):
            if part.count("=") != 1:
                raise ParseError(f"expected an equation, got {part!r}", line, col)
            lhs, rhs = part.split("=")
            eqs.append(parse_expr(lhs, line, col) - parse_expr(rhs, line, col))
        if not eqs:
            raise ParseError("empty locus", line, col)
        source = chart
        images = list(chart.symbols())
        for h in eqs:
            h = subs(h, dict(zip(chart.coords, images)))
            sol = _solve_linear_coordinate(h, source)
            if sol is None:
                raise ConfigurationError(f"cannot solve {h} = 0 for a coordinate; give an explicit map with 'along'")
            x, value = sol
            others = [c for c in source.coords if c != x]
            if not others:
                raise ConfigurationError("the locus is a single point")
            images = [subs(img, {x: value}) for img in images]
            source = Chart(others)
        return ParamMap(source, chart, images)
    m = re.fullmatch(r"\((.*?)\)\s*->\s*\((.*)\)", text)
    if not m:
        raise ParseError("expected '(s, ...) -> (x = ..., ...)'", line, col)
    params = [p.strip() for p in m.group(1).split(",") if p.strip()]
    if not params or not all(re.fullmatch(IDENT, p) for p in params):
        raise ParseError("parameters must be identifiers", line, col)
    given = {}
    for part in split_tuple(m.group(2)):
        if "=" in part:
            lhs, rhs = part.split("=", 1)
            lhs = lhs.strip()
            value = parse_expr(rhs, line, col)
        else:
            lhs = part.strip()
            value = Expr.sym(lhs)
        if lhs not in chart.coords:
            raise ParseError(f"{lhs!r} is not a coordinate of chart {chart}", line, col)
        if lhs in given:
            raise ParseError(f"coordinate {lhs!r} assigned twice", line, col)
        given[lhs] = value
    missing = [c for c in chart.coords if c not in given]
    if missing:
        raise ParseError(f"map leaves coordinate(s) {', '.join(missing)} unassigned", line, col)
    return ParamMap(Chart(params), chart, [given[c] for c in chart.coords])


def load_workspace(text: str, seed: int = 0) -> Workspace:
    return WorkspaceParser(seed).parse(text)
