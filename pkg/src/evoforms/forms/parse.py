"""Form expressions: the scalar grammar plus basis 1-forms ``dX`` and wedge."""
from __future__ import annotations

from ..errors import ChartMismatch, DegreeError, ParseError
from ..expr import Expr
from ..expr.parse import Parser, ScalarAlgebra, Token
from .core import Chart, DForm, wedge


class FormAlgebra(ScalarAlgebra):
    def __init__(self, chart: Chart):
        self.chart = chart
        self.basis = {"d" + c: c for c in chart.coords}

    def _lift(self, v, degree: int | None = None) -> DForm:
        if isinstance(v, DForm):
            return v
        return DForm.scalar(self.chart, v)

    def is_form(self, v) -> bool:
        return isinstance(v, DForm)

    def wants_wedge(self, tok: Token) -> bool:
        return True

    def name(self, ident: str, tok: Token):
        if ident in self.basis:
            return DForm.basis(self.chart, self.basis[ident])
        return Expr.sym(ident)

    def call(self, ident, args, orders, tok):
        if any(isinstance(a, DForm) for a in args):
            raise ParseError("function arguments must be scalars", tok.line, tok.col)
        return super().call(ident, args, orders, tok)

    def _combine(self, a, b, tok, op):
        if isinstance(a, Expr) and isinstance(b, Expr):
            return a + b if op == "+" else a - b
        fa, fb = self._lift(a), self._lift(b)
        if fa.degree != fb.degree:
            if fa.is_zero or fb.is_zero:
                fa = fa if not fa.is_zero else DForm.zero(self.chart, fb.degree)
                fb = fb if not fb.is_zero else DForm.zero(self.chart, fa.degree)
            else:
                raise ParseError(f"cannot add forms of degree {fa.degree} and {fb.degree}",
                                 tok.line if tok else 1, tok.col if tok else 1)
        return fa + fb if op == "+" else fa - fb

    def add(self, a, b):
        return self._combine(a, b, None, "+")

    def sub(self, a, b):
        return self._combine(a, b, None, "-")

    def neg(self, a):
        return -a

    def mul(self, a, b, tok):
        if isinstance(a, DForm) and isinstance(b, DForm):
            return wedge(a, b)
        if isinstance(a, DForm):
            return a * b
        if isinstance(b, DForm):
            return b * a
        return a * b

    def div(self, a, b, tok):
        if isinstance(b, DForm):
            if b.degree == 0:
                b = b.value
            else:
                raise ParseError("cannot divide by a form", tok.line, tok.col)
        if isinstance(a, DForm):
            return a / b
        return super().div(a, b, tok)

    def power(self, a, q, tok):
        if isinstance(a, DForm):
            raise ParseError("a form cannot be raised to a power", tok.line, tok.col)
        return super().power(a, q, tok)

    def wedge(self, a, b, tok):
        return wedge(self._lift(a), self._lift(b))


def parse_form(text: str, chart: Chart, degree: int | None = None, line: int = 1, col: int = 1) -> DForm:
    """Parse ``text`` on ``chart``; a scalar result becomes a 0-form."""
    if not text.strip():
        raise ParseError("empty form expression", line, col)
    try:
        value = Parser(text, FormAlgebra(chart), line, col).parse()
    except ChartMismatch as exc:
        raise ParseError(str(exc), line, col) from None
    form = value if isinstance(value, DForm) else DForm.scalar(chart, value)
    if degree is not None and form.degree != degree:
        if form.is_zero:
            return DForm.zero(chart, degree)
        raise DegreeError(f"expression has degree {form.degree}, declared degree is {degree}")
    return form
