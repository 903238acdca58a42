"""Charts, differential forms and the basic exterior-algebra operations."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from ..errors import ChartMismatch, DegreeError
from ..expr import ZERO, Expr, as_expr, diff, equals_zero, subs
from ..expr.printing import coefficient_string


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names of a local frame."""

    coords: tuple

    def __init__(self, coords: Iterable[str]):
        coords = tuple(str(c) for c in coords)
        if not coords:
            raise ChartMismatch("a chart needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise ChartMismatch(f"duplicate coordinate in chart {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise ChartMismatch(f"{name!r} is not a coordinate of chart {self}") from None

    def symbols(self) -> tuple:
        return tuple(Expr.sym(c) for c in self.coords)

    def keys(self, p: int) -> list:
        return list(combinations(range(self.dim), p)) if 0 <= p <= self.dim else []

    def __str__(self) -> str:
        return "(" + ", ".join(self.coords) + ")"


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an index repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _check_chart(a: Chart, b: Chart) -> None:
    if a != b:
        raise ChartMismatch(f"forms live on different charts {a} and {b}")


class DForm:
    """A degree-p form: strictly increasing index tuples mapped to coefficients."""

    __slots__ = ("chart", "degree", "coeffs")

    def __init__(self, chart: Chart, degree: int, coeffs: Mapping[tuple, object] | None = None):
        if degree < 0:
            raise DegreeError("form degree must be non-negative")
        self.chart = chart
        self.degree = degree
        clean = {}
        for key, v in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise DegreeError(f"index {key} does not match degree {degree}")
            v = as_expr(v)
            if v.is_zero:
                continue
            if any(i < 0 or i >= chart.dim for i in key):
                raise ChartMismatch(f"index {key} outside chart {chart}")
            s = perm_sign(key)
            if s == 0:
                continue
            skey = tuple(sorted(key))
            total = clean.get(skey, ZERO) + (v if s > 0 else -v)
            if total.is_zero:
                clean.pop(skey, None)
            else:
                clean[skey] = total
        if degree > chart.dim:
            clean = {}
        self.coeffs = dict(sorted(clean.items()))

    # constructors -------------------------------------------------------

    @staticmethod
    def scalar(chart: Chart, value) -> "DForm":
        return DForm(chart, 0, {(): as_expr(value)})

    @staticmethod
    def basis(chart: Chart, *names: str) -> "DForm":
        idx = tuple(chart.index(n) for n in names)
        return DForm(chart, len(idx), {idx: 1})

    @staticmethod
    def one_form(chart: Chart, components: Sequence) -> "DForm":
        if len(components) != chart.dim:
            raise ChartMismatch("one component per coordinate is required")
        return DForm(chart, 1, {(i,): c for i, c in enumerate(components)})

    @staticmethod
    def zero(chart: Chart, degree: int) -> "DForm":
        return DForm(chart, degree, {})

    # access -------------------------------------------------------------

    def __getitem__(self, key) -> Expr:
        if isinstance(key, int):
            key = (key,)
        key = tuple(key)
        s = perm_sign(key)
        if s == 0 or len(key) != self.degree:
            return ZERO
        v = self.coeffs.get(tuple(sorted(key)), ZERO)
        return v if s > 0 else -v

    def component(self, *names: str) -> Expr:
        return self[tuple(self.chart.index(n) for n in names)]

    @property
    def value(self) -> Expr:
        """The scalar of a degree-0 form."""
        if self.degree != 0:
            raise DegreeError("only a 0-form has a scalar value")
        return self.coeffs.get((), ZERO)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self):
        return self.coeffs.items()

    def map(self, fn) -> "DForm":
        return DForm(self.chart, self.degree, {k: fn(v) for k, v in self.coeffs.items()})

    def free_symbols(self) -> frozenset:
        out: set = set()
        for v in self.coeffs.values():
            out |= v.free_symbols()
        return frozenset(out)

    # algebra ------------------------------------------------------------

    def _same(self, other: "DForm") -> None:
        _check_chart(self.chart, other.chart)
        if self.degree != other.degree:
            raise DegreeError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other: "DForm") -> "DForm":
        self._same(other)
        d = dict(self.coeffs)
        for k, v in other.coeffs.items():
            d[k] = d.get(k, ZERO) + v
        return DForm(self.chart, self.degree, d)

    def __neg__(self) -> "DForm":
        return self.map(lambda v: -v)

    def __sub__(self, other: "DForm") -> "DForm":
        return self + (-other)

    def __mul__(self, other) -> "DForm":
        if isinstance(other, DForm):
            return wedge(self, other)
        f = as_expr(other)
        return self.map(lambda v: v * f)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DForm":
        f = as_expr(other)
        return self.map(lambda v: v / f)

    def __xor__(self, other: "DForm") -> "DForm":
        return wedge(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DForm):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.chart, self.degree, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"DForm({self.chart}, {self.degree}, {self})"

    def __str__(self) -> str:
        return form_string(self)


def basis_string(chart: Chart, key: tuple) -> str:
    return "^".join("d" + chart.coords[i] for i in key)


def form_string(w: DForm) -> str:
    if w.degree == 0:
        return str(w.value)
    if not w.coeffs:
        return "0"
    parts = []
    for i, (key, c) in enumerate(w.coeffs.items()):
        neg, text = coefficient_string(c)
        body = basis_string(w.chart, key) if text is None else f"{text}*{basis_string(w.chart, key)}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# --------------------------------------------------------------------------- operations


def wedge(a: DForm, b: DForm) -> DForm:
    """Exterior product; the zero form when the degrees exceed the dimension."""
    _check_chart(a.chart, b.chart)
    p = a.degree + b.degree
    out: dict = {}
    if p <= a.chart.dim:
        for ka, va in a.coeffs.items():
            for kb, vb in b.coeffs.items():
                if set(ka) & set(kb):
                    continue
                key = ka + kb
                s = perm_sign(key)
                skey = tuple(sorted(key))
                prod = va * vb
                out[skey] = out.get(skey, ZERO) + (prod if s > 0 else -prod)
    return DForm(a.chart, p, out)


def exterior_derivative(w: DForm) -> DForm:
    """d(w) = sum_alpha d_alpha(a_I) dx^alpha ^ dx^I."""
    chart = w.chart
    out: dict = {}
    if w.degree + 1 <= chart.dim:
        for key, a in w.coeffs.items():
            names = a.free_symbols()
            for alpha, x in enumerate(chart.coords):
                if alpha in key or x not in names:
                    continue
                da = diff(a, x)
                if da.is_zero:
                    continue
                full = (alpha,) + key
                s = perm_sign(full)
                skey = tuple(sorted(full))
                out[skey] = out.get(skey, ZERO) + (da if s > 0 else -da)
    return DForm(chart, w.degree + 1, out)


d = exterior_derivative


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    components: tuple

    def __init__(self, chart: Chart, components: Sequence):
        if len(components) != chart.dim:
            raise ChartMismatch("a vector field needs one component per coordinate")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "components", tuple(as_expr(c) for c in components))

    @staticmethod
    def coordinate(chart: Chart, name: str) -> "VectorField":
        comps = [0] * chart.dim
        comps[chart.index(name)] = 1
        return VectorField(chart, comps)

    def __str__(self) -> str:
        parts = [f"({c})*d/d{x}" for c, x in zip(self.components, self.chart.coords) if not c.is_zero]
        return " + ".join(parts) if parts else "0"


def interior_product(X: VectorField, w: DForm) -> DForm:
    """Contraction of X into the first slot; a 0-form maps to the zero form."""
    _check_chart(X.chart, w.chart)
    if w.degree == 0:
        return DForm.zero(w.chart, 0)
    out: dict = {}
    for key, a in w.coeffs.items():
        for pos, alpha in enumerate(key):
            x = X.components[alpha]
            if x.is_zero:
                continue
            rest = key[:pos] + key[pos + 1:]
            term = x * a
            out[rest] = out.get(rest, ZERO) + (term if pos % 2 == 0 else -term)
    return DForm(w.chart, w.degree - 1, out)


@dataclass(frozen=True)
class ParamMap:
    """Map from a parameter chart into a target chart: x^alpha = images[alpha](u)."""

    source: Chart
    target: Chart
    images: tuple

    def __init__(self, source: Chart, target: Chart, images: Sequence):
        if len(images) != target.dim:
            raise ChartMismatch(
                f"map gives {len(images)} images for a chart of dimension {target.dim}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", tuple(as_expr(v) for v in images))

    def substitution(self) -> dict:
        return {x: img for x, img in zip(self.target.coords, self.images)}

    def jacobian(self) -> list:
        return [[diff(img, u) for u in self.source.coords] for img in self.images]

    def __str__(self) -> str:
        lhs = ", ".join(self.source.coords)
        rhs = ", ".join(f"{x} = {img}" for x, img in zip(self.target.coords, self.images))
        return f"({lhs}) -> ({rhs})"


def determinant(m: list) -> Expr:
    """Cofactor expansion; fine for the small matrices used here."""
    n = len(m)
    if n == 0:
        return Expr.num(1)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ZERO
    for j in range(n):
        if m[0][j].is_zero:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * determinant(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def pullback(phi: ParamMap, w: DForm) -> DForm:
    """Pull ``w`` back along ``phi`` by substitution and Jacobian minors."""
    _check_chart(phi.target, w.chart)
    src = phi.source
    p = w.degree
    if p > src.dim:
        return DForm.zero(src, p)
    sub = phi.substitution()
    jac = phi.jacobian()
    out: dict = {}
    for key, a in w.coeffs.items():
        a_star = subs(a, sub)
        if a_star.is_zero:
            continue
        for jkey in src.keys(p):
            minor = determinant([[jac[i][j] for j in jkey] for i in key])
            if minor.is_zero:
                continue
            out[jkey] = out.get(jkey, ZERO) + a_star * minor
    return DForm(src, p, out)


def forms_equal(a: DForm, b: DForm, domain=None) -> bool:
    """Coefficient-wise equality using the tri-state zero test."""
    diffs = a - b
    return all(equals_zero(v, domain).is_zero for v in diffs.coeffs.values())


def form_zero_status(w: DForm, domain=None, bodies=None) -> dict:
    """Per-key zero status of every coefficient of ``w``."""
    return {k: equals_zero(v, domain, bodies) for k, v in w.coeffs.items()}


def scale_form(w: DForm, f) -> DForm:
    f = as_expr(f)
    return w.map(lambda v: v * f)


def substitute_form(w: DForm, mapping: Mapping[str, object]) -> DForm:
    return w.map(lambda v: subs(v, mapping))


__all__ = [
    "Chart", "DForm", "VectorField", "ParamMap", "wedge", "exterior_derivative", "d", "interior_product",
    "pullback", "perm_sign", "determinant", "forms_equal", "form_zero_status", "form_string", "basis_string",
    "scale_form", "substitute_form",
]
