"""Tokenizer and recursive-descent parser for the expression grammar.

The parser is written against a small algebra interface so that the same
grammar serves plain scalar expressions and differential-form expressions
(where ``dx`` is a basis 1-form and ``^`` between forms is the wedge).

Precedence, loosest first: ``+ -``, ``* /``, unary minus, ``^``.  Exponents
are signed integers or a parenthesized rational such as ``^(1/2)``.  Opaque
derivatives are written ``f'(u)``, ``f''(u)`` or ``f'[1,0](x, y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..errors import ParseError
from .core import BUILTINS, Expr, func

_SINGLE = set("+-*/^(),[]'")


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, end
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list:
    toks: list = []
    i = 0
    n = len(text)
    ln, cl = line, col
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            ln += 1
            cl = 1
            continue
        if ch.isspace():
            i += 1
            cl += 1
            continue
        start_col = cl
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            toks.append(Token("num", text[i:j], ln, start_col))
            cl += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("ident", text[i:j], ln, start_col))
            cl += j - i
            i = j
            continue
        if ch in _SINGLE:
            toks.append(Token("op", ch, ln, start_col))
        elif ch in "∧":
            toks.append(Token("op", "^w", ln, start_col))
        elif ch == "−":
            toks.append(Token("op", "-", ln, start_col))
        else:
            raise ParseError(f"unknown operator {ch!r}", ln, start_col)
        i += 1
        cl += 1
    toks.append(Token("end", "", ln, cl))
    return toks


class ScalarAlgebra:
    """Builds :class:`Expr` values."""

    def number(self, value: Fraction, tok: Token) -> Any:
        return Expr.num(value)

    def name(self, ident: str, tok: Token) -> Any:
        return Expr.sym(ident)

    def call(self, ident: str, args: list, orders, tok: Token) -> Any:
        if ident in BUILTINS and orders is None and len(args) != 1:
            raise ParseError(f"{ident} takes one argument", tok.line, tok.col)
        try:
            return func(ident, *args, orders=orders)
        except TypeError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b, tok: Token):
        return a * b

    def div(self, a, b, tok: Token):
        from ..errors import DivisionByZero

        try:
            return a / b
        except DivisionByZero:
            raise ParseError("division by zero", tok.line, tok.col) from None

    def neg(self, a):
        return -a

    def power(self, a, q: Fraction, tok: Token):
        from ..errors import DivisionByZero

        try:
            return a ** q
        except DivisionByZero:
            raise ParseError("zero raised to a negative power", tok.line, tok.col) from None

    def wedge(self, a, b, tok: Token):
        raise ParseError("wedge product is only valid in a form expression", tok.line, tok.col)

    def wants_wedge(self, tok: Token) -> bool:
        return False


class Parser:
    def __init__(self, text: str, algebra=None, line: int = 1, col: int = 1):
        self.toks = tokenize(text, line, col)
        self.pos = 0
        self.alg = algebra or ScalarAlgebra()

    # token helpers
    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def is_op(self, text: str, tok: Token | None = None) -> bool:
        tok = tok or self.cur
        return tok.kind == "op" and tok.text == text

    def expect(self, text: str, what: str | None = None) -> Token:
        if not self.is_op(text):
            t = self.cur
            if text == ")" :
                raise ParseError("unbalanced parenthesis", t.line, t.col)
            found = t.text or "end of input"
            raise ParseError(f"expected {what or repr(text)}, found {found!r}", t.line, t.col)
        return self.advance()

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.cur
        raise ParseError(msg, tok.line, tok.col)

    # grammar
    def parse(self):
        value = self.expr()
        if self.cur.kind != "end":
            t = self.cur
            if self.is_op(")"):
                self.error("unbalanced parenthesis", t)
            self.error(f"unexpected {t.text!r}", t)
        return value

    def expr(self):
        value = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.advance().text
            rhs = self.term()
            value = self.alg.add(value, rhs) if op == "+" else self.alg.sub(value, rhs)
        return value

    def term(self):
        value = self.unary()
        while self.is_op("*") or self.is_op("/"):
            tok = self.advance()
            rhs = self.unary()
            value = self.alg.mul(value, rhs, tok) if tok.text == "*" else self.alg.div(value, rhs, tok)
        return value

    def unary(self):
        if self.is_op("-"):
            self.advance()
            return self.alg.neg(self.unary())
        if self.is_op("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        value = self.base()
        while True:
            if self.is_op("^w"):
                tok = self.advance()
                value = self.alg.wedge(value, self.wedge_operand(), tok)
                continue
            if not self.is_op("^"):
                return value
            tok = self.advance()
            save = self.pos
            q = self.try_exponent()
            if q is not None and not (self.alg.wants_wedge(tok) and self._operand_is_form(value)):
                value = self.alg.power(value, q, tok)
                continue
            self.pos = save
            if self.alg.wants_wedge(tok):
                value = self.alg.wedge(value, self.wedge_operand(), tok)
                continue
            self.error("exponent must be an integer or a parenthesized rational", self.cur)

    def _operand_is_form(self, value) -> bool:
        checker = getattr(self.alg, "is_form", None)
        return bool(checker and checker(value))

    def wedge_operand(self):
        if self.is_op("-"):
            self.advance()
            return self.alg.neg(self.wedge_operand())
        return self.base()

    def try_exponent(self) -> Fraction | None:
        sign = 1
        if self.is_op("-") or self.is_op("+"):
            sign = -1 if self.advance().text == "-" else 1
        if self.cur.kind == "num":
            t = self.advance()
            if "." in t.text:
                self.error("exponent must be an integer or a parenthesized rational", t)
            return sign * Fraction(int(t.text))
        if self.is_op("("):
            self.advance()
            inner_sign = 1
            if self.is_op("-"):
                self.advance()
                inner_sign = -1
            if self.cur.kind != "num" or "." in self.cur.text:
                return None
            num = int(self.advance().text)
            den = 1
            if self.is_op("/"):
                self.advance()
                if self.cur.kind != "num" or "." in self.cur.text:
                    return None
                den = int(self.advance().text)
                if den == 0:
                    self.error("zero denominator in exponent")
            if not self.is_op(")"):
                return None
            self.advance()
            return sign * inner_sign * Fraction(num, den)
        return None

    def base(self):
        t = self.cur
        if t.kind == "num":
            self.advance()
            return self.alg.number(Fraction(t.text), t)
        if t.kind == "ident":
            self.advance()
            orders = None
            if self.is_op("'"):
                count = 0
                while self.is_op("'"):
                    self.advance()
                    count += 1
                if self.is_op("["):
                    if count != 1:
                        self.error("use either primes or an order list, not both")
                    orders = self.order_list()
                else:
                    orders = [count]
                if not self.is_op("("):
                    self.error("derivative mark must be followed by an argument list")
            if self.is_op("("):
                self.advance()
                args = [self.expr()]
                while self.is_op(","):
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                if orders is not None and len(orders) != len(args):
                    if len(orders) == 1 and len(args) > 1:
                        self.error("use f'[i,j,...](...) for functions of several arguments", t)
                    self.error("derivative order count does not match argument count", t)
                if orders is not None and t.text in BUILTINS:
                    self.error(f"derivative marks are not allowed on built-in {t.text}", t)
                return self.alg.call(t.text, args, tuple(orders) if orders is not None else None, t)
            return self.alg.name(t.text, t)
        if self.is_op("("):
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        if t.kind == "end":
            self.error("unexpected end of input", t)
        self.error(f"unexpected {t.text!r}", t)

    def order_list(self) -> list:
        self.expect("[")
        out = []
        while True:
            if self.cur.kind != "num" or "." in self.cur.text:
                self.error("derivative orders must be non-negative integers")
            out.append(int(self.advance().text))
            if self.is_op(","):
                self.advance()
                continue
            break
        self.expect("]", "']'")
        return out


def parse_expr(text: str, line: int = 1, col: int = 1) -> Expr:
    """Parse a scalar expression into canonical form."""
    if not text.strip():
        raise ParseError("empty expression", line, col)
    return Parser(text, ScalarAlgebra(), line, col).parse()
