"""Canonical symbolic expressions.

An :class:`Expr` is stored fully expanded: a sum of terms, each term being an
exact rational coefficient times a monomial, and each monomial a product of
*kernels* raised to rational exponents.  Kernels are the atoms that cannot be
expanded any further:

* :class:`Symbol` -- a named scalar;
* :class:`Call` -- a built-in function (ln, exp, sin, cos) or an opaque
  function carrying a formal derivative order per argument;
* :class:`Group` -- a multi-term sum raised to a negative or fractional power
  (for example ``1/(x^2 + y^2)``), or a constant under a fractional power.

Because every operation rebuilds this normal form, two expressions are equal
exactly when their term tuples are equal, and zero has the unique
representation of the empty sum.  Symbols are treated as positive when a
rewrite needs it (``ln(x*y) = ln(x) + ln(y)``, ``(x^2)^(1/2) = x``).
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

from ..errors import DivisionByZero, ExpressionTooLarge, Singularity

BUILTINS = ("ln", "exp", "sin", "cos")

Number = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[Kernel, Fraction], ...] sorted by kernel key

_ONE = Fraction(1)
_ZERO = Fraction(0)


def max_terms() -> int:
    raw = os.environ.get("FORMS_MAX_TERMS")
    if not raw:
        return 100000
    try:
        return max(1, int(raw))
    except ValueError:
        return 100000


# --------------------------------------------------------------------------- kernels


class Kernel:
    """Atomic factor of a monomial.  Ordered by ``key``."""

    __slots__ = ("key", "_hash")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Kernel) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Kernel") -> bool:
        return self.key < other.key

    def _set_key(self, key: tuple) -> None:
        self.key = key
        self._hash = hash(key)


class Symbol(Kernel):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        # (node kind, symbol name, child count, children, derivative orders)
        self._set_key((1, name, 0, (), ()))

    def __repr__(self) -> str:
        return f"Symbol({self.name!r})"


class Call(Kernel):
    """Function application.  ``orders`` is None for the built-ins."""

    __slots__ = ("name", "args", "orders")

    def __init__(self, name: str, args: tuple, orders: tuple | None = None):
        self.name = name
        self.args = tuple(args)
        if name in BUILTINS and orders is None:
            self.orders = None
            self._set_key((2, name, len(self.args), tuple(a.key for a in self.args), ()))
        else:
            self.orders = tuple(orders) if orders is not None else (0,) * len(self.args)
            self._set_key((3, name, len(self.args), tuple(a.key for a in self.args), self.orders))

    @property
    def builtin(self) -> bool:
        return self.orders is None

    def __repr__(self) -> str:
        return f"Call({self.name!r}, {self.args!r}, {self.orders!r})"


class Group(Kernel):
    """A sum (or a constant) that is kept unexpanded under its exponent."""

    __slots__ = ("base",)

    def __init__(self, base: "Expr"):
        self.base = base
        self._set_key((4, "", len(base.terms), base.key, ()))

    def __repr__(self) -> str:
        return f"Group({self.base})"


# --------------------------------------------------------------------------- helpers


def _term_key(mono: Monomial) -> tuple:
    deg = sum((e for _, e in mono), _ZERO)
    return (-deg, tuple((k.key, -e) for k, e in mono))


def _as_fraction(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


def _rational_power(c: Fraction, q: Fraction) -> Fraction | None:
    if q.denominator == 1:
        if c == 0 and q < 0:
            raise DivisionByZero("0 raised to a negative power")
        return c ** int(q)
    if c <= 0:
        return None if c < 0 else _ZERO
    num = _iroot(c.numerator, q.denominator)
    den = _iroot(c.denominator, q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** q.numerator


def _needs_normalizing(kd: dict) -> bool:
    exp_count = 0
    for k, e in kd.items():
        if e == 0:
            return True
        if isinstance(k, Group):
            if e.denominator == 1 and (e > 0 or len(k.base.terms) == 1):
                return True
        elif isinstance(k, Call) and k.orders is None and k.name == "exp":
            exp_count += 1
            if e != 1 or exp_count > 1:
                return True
    return False


# --------------------------------------------------------------------------- Expr


class Expr:
    """Immutable canonical expression; see the module docstring."""

    __slots__ = ("terms", "key", "_hash")

    def __init__(self, terms: tuple = ()):
        # Internal constructor: callers pass an already canonical tuple.
        self.terms = terms
        self.key = tuple((tuple((k.key, e) for k, e in m), c) for m, c in terms)
        self._hash = hash(self.key)

    # construction -------------------------------------------------------

    @staticmethod
    def _from_dict(d: dict) -> "Expr":
        items = [(m, c) for m, c in d.items() if c != 0]
        limit = max_terms()
        if len(items) > limit:
            raise ExpressionTooLarge(f"expression has {len(items)} terms (limit {limit})")
        items.sort(key=lambda mc: _term_key(mc[0]))
        return Expr(tuple(items))

    @staticmethod
    def num(value: Number) -> "Expr":
        value = _as_fraction(value)
        return ZERO if value == 0 else Expr((((), value),))

    @staticmethod
    def sym(name: str) -> "Expr":
        return Expr(((((Symbol(name), _ONE),), _ONE),))

    @staticmethod
    def kernel(k: Kernel, e: Number = 1) -> "Expr":
        return _term_expr(_ONE, {k: _as_fraction(e)})

    # basic queries -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Expr):
            return self.key == other.key
        if isinstance(other, (int, Fraction)):
            return self.key == Expr.num(other).key
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_number(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == ())

    def as_number(self) -> Fraction | None:
        if not self.terms:
            return _ZERO
        if len(self.terms) == 1 and self.terms[0][0] == ():
            return self.terms[0][1]
        return None

    @property
    def is_symbol(self) -> bool:
        if len(self.terms) != 1:
            return False
        m, c = self.terms[0]
        return c == 1 and len(m) == 1 and isinstance(m[0][0], Symbol) and m[0][1] == 1

    @property
    def name(self) -> str:
        if not self.is_symbol:
            raise ValueError(f"{self} is not a symbol")
        return self.terms[0][0][0][0].name

    def kernels(self) -> set:
        out: set = set()
        for m, _ in self.terms:
            for k, _ in m:
                out.add(k)
        return out

    def free_symbols(self) -> frozenset:
        return _free_symbols(self)

    def functions(self) -> frozenset:
        """Names of opaque functions appearing anywhere in the expression."""
        return _functions(self)

    def has(self, name: str) -> bool:
        return name in self.free_symbols()

    # arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "Expr":
        other = as_expr(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, _ZERO) + c
        return Expr._from_dict(d)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other) -> "Expr":
        return self + (-as_expr(other))

    def __rsub__(self, other) -> "Expr":
        return as_expr(other) + (-self)

    def __mul__(self, other) -> "Expr":
        return _mul(self, as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        other = as_expr(other)
        n = other.as_number()
        if n is not None:
            if n == 0:
                raise DivisionByZero("division by zero")
            return self.scale(1 / n)
        return _mul(self, other ** -1)

    def __rtruediv__(self, other) -> "Expr":
        return as_expr(other) / self

    def __pow__(self, q) -> "Expr":
        return _pow(self, _as_fraction(q) if not isinstance(q, float) else Fraction(q).limit_denominator())

    def scale(self, c: Number) -> "Expr":
        c = _as_fraction(c)
        if c == 0:
            return ZERO
        if c == 1:
            return self
        return Expr(tuple((m, v * c) for m, v in self.terms))

    # structure -----------------------------------------------------------

    def tree(self):
        """Nested-tuple view: const / symbol / sum / product / power / call."""
        if not self.terms:
            return ("const", _ZERO)
        if len(self.terms) > 1:
            return ("sum", tuple(Expr(((m, c),)).tree() for m, c in self.terms))
        m, c = self.terms[0]
        factors = []
        if c != 1 or not m:
            factors.append(("const", c))
        for k, e in m:
            node = _kernel_tree(k)
            factors.append(node if e == 1 else ("power", node, e))
        return factors[0] if len(factors) == 1 else ("product", tuple(factors))

    def coefficient_map(self) -> dict:
        return dict(self.terms)

    def __repr__(self) -> str:
        return f"Expr({str(self)!r})"

    def __str__(self) -> str:
        from .printing import to_string

        return to_string(self)

    # calculus convenience ------------------------------------------------

    def diff(self, x: str) -> "Expr":
        return diff(self, x)

    def subs(self, mapping: Mapping[str, object]) -> "Expr":
        return subs(self, mapping)


ZERO = Expr(())
ONE = Expr((((), _ONE),))


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Expr.num(x)
    if isinstance(x, str):
        from .parse import parse_expr

        return parse_expr(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Expr")


def sym(name: str) -> Expr:
    return Expr.sym(name)


def symbols(names: str | Iterable[str]) -> tuple:
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return tuple(Expr.sym(n) for n in names)


def _kernel_tree(k: Kernel):
    if isinstance(k, Symbol):
        return ("symbol", k.name)
    if isinstance(k, Call):
        return ("call", k.name, tuple(a.tree() for a in k.args), k.orders)
    return k.base.tree()


@lru_cache(maxsize=65536)
def _free_symbols(e: Expr) -> frozenset:
    out: set = set()
    for k in e.kernels():
        if isinstance(k, Symbol):
            out.add(k.name)
        elif isinstance(k, Call):
            for a in k.args:
                out |= _free_symbols(a)
        else:
            out |= _free_symbols(k.base)
    return frozenset(out)


@lru_cache(maxsize=65536)
def _functions(e: Expr) -> frozenset:
    out: set = set()
    for k in e.kernels():
        if isinstance(k, Call):
            if not k.builtin:
                out.add(k.name)
            for a in k.args:
                out |= _functions(a)
        elif isinstance(k, Group):
            out |= _functions(k.base)
    return frozenset(out)


# --------------------------------------------------------------------------- products and powers


def _term_expr(coeff: Fraction, kd: dict) -> Expr:
    """Normalize a single coefficient-times-kernel-power product."""
    if coeff == 0:
        return ZERO
    if not _needs_normalizing(kd):
        mono = tuple(sorted(((k, e) for k, e in kd.items()), key=lambda ke: ke[0].key))
        return Expr(((mono, coeff),))
    simple: dict = {}
    extra: list = []
    exp_arg = ZERO
    exp_seen = False
    for k, e in kd.items():
        if e == 0:
            continue
        if isinstance(k, Group) and e.denominator == 1 and (e > 0 or len(k.base.terms) == 1):
            extra.append(k.base ** int(e))
        elif isinstance(k, Call) and k.orders is None and k.name == "exp":
            exp_seen = True
            exp_arg = exp_arg + k.args[0].scale(e)
        else:
            simple[k] = e
    if exp_seen:
        extra.append(exp_(exp_arg))
    mono = tuple(sorted(simple.items(), key=lambda ke: ke[0].key))
    out = Expr(((mono, coeff),))
    for x in extra:
        out = _mul(out, x)
    return out


def _mul(a: Expr, b: Expr) -> Expr:
    if not a.terms or not b.terms:
        return ZERO
    if len(b.terms) == 1 and b.terms[0][0] == ():
        return a.scale(b.terms[0][1])
    if len(a.terms) == 1 and a.terms[0][0] == ():
        return b.scale(a.terms[0][1])
    acc: dict = {}
    pending: list = []
    for ma, ca in a.terms:
        for mb, cb in b.terms:
            if not ma:
                kd_mono, c = mb, ca * cb
                acc[kd_mono] = acc.get(kd_mono, _ZERO) + c
                continue
            if not mb:
                acc[ma] = acc.get(ma, _ZERO) + ca * cb
                continue
            kd = dict(ma)
            for k, e in mb:
                kd[k] = kd.get(k, _ZERO) + e
            if _needs_normalizing(kd):
                pending.append(_term_expr(ca * cb, kd))
            else:
                mono = tuple(sorted(kd.items(), key=lambda ke: ke[0].key))
                acc[mono] = acc.get(mono, _ZERO) + ca * cb
    for p in pending:
        for m, c in p.terms:
            acc[m] = acc.get(m, _ZERO) + c
    return Expr._from_dict(acc)


def content(e: Expr) -> tuple:
    """Split ``e`` as ``c * m * S`` with S primitive and leading coefficient positive.

    Returns ``(c, m, S)`` with ``c`` a Fraction and ``m`` a monomial Expr.
    """
    if not e.terms:
        return _ONE, ONE, ZERO
    nums = 0
    dens = 1
    for _, c in e.terms:
        nums = gcd(nums, c.numerator)
        dens = dens * c.denominator // gcd(dens, c.denominator)
    c = Fraction(nums, dens)
    mins: dict = {}
    for m, _ in e.terms:
        for k, v in m:
            mins[k] = min(mins.get(k, v), v)
    for m, _ in e.terms:
        present = {k for k, _ in m}
        for k in mins:
            if k not in present:
                mins[k] = min(mins[k], _ZERO)
    mins = {k: v for k, v in mins.items() if v != 0}
    inv = {k: -v for k, v in mins.items()}
    acc: dict = {}
    for mono, coef in e.terms:
        kd = dict(mono)
        for k, v in inv.items():
            kd[k] = kd.get(k, _ZERO) + v
        kd = {k: v for k, v in kd.items() if v != 0}
        key = tuple(sorted(kd.items(), key=lambda ke: ke[0].key))
        acc[key] = acc.get(key, _ZERO) + coef / c
    s = Expr._from_dict(acc)
    if s.terms and s.terms[0][1] < 0:
        s = -s
        c = -c
    mono = tuple(sorted(mins.items(), key=lambda ke: ke[0].key))
    return c, Expr(((mono, _ONE),)), s


def _pow(e: Expr, q: Fraction) -> Expr:
    if q == 0:
        return ONE
    if q == 1:
        return e
    if not e.terms:
        if q > 0:
            return ZERO
        raise DivisionByZero("0 raised to a negative power")
    if len(e.terms) == 1:
        mono, c = e.terms[0]
        cq = _rational_power(c, q)
        kd: dict = {}
        for k, x in mono:
            kd[k] = x * q
        if cq is None:
            if c > 0:
                g = Group(Expr.num(c))
                kd[g] = kd.get(g, _ZERO) + q
                cq = _ONE
            else:
                return Expr.kernel(Group(e), q)
        return _term_expr(cq, kd)
    if q.denominator == 1 and q > 0:
        n = int(q)
        result = ONE
        base = e
        while n:
            if n & 1:
                result = _mul(result, base)
            n >>= 1
            if n:
                base = _mul(base, base)
        return result
    c, m, s = content(e)
    out = _pow(Expr.num(c), q) if c != 1 else ONE
    if m != ONE:
        out = _mul(out, _pow(m, q))
    if len(s.terms) == 1:
        return _mul(out, _pow(s, q))
    return _mul(out, _term_expr(_ONE, {Group(s): q}))


# --------------------------------------------------------------------------- functions


def _factor_int(n: int) -> dict:
    out: dict = {}
    p = 2
    while p * p <= n and p < 100000:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _ln_positive_rational(c: Fraction) -> Expr:
    out = ZERO
    for p, k in _factor_int(c.numerator).items():
        out = out + Expr.kernel(Call("ln", (Expr.num(p),))).scale(k)
    for p, k in _factor_int(c.denominator).items():
        out = out - Expr.kernel(Call("ln", (Expr.num(p),))).scale(k)
    return out


def _ln_kernel(k: Kernel) -> Expr:
    if isinstance(k, Call) and k.builtin and k.name == "exp":
        return k.args[0]
    if isinstance(k, Group):
        return ln_(k.base)
    return Expr.kernel(Call("ln", (Expr.kernel(k),)))


def ln_(u) -> Expr:
    u = as_expr(u)
    if not u.terms:
        raise Singularity("ln(0)")
    if len(u.terms) == 1:
        mono, c = u.terms[0]
        if c < 0:
            return Expr.kernel(Call("ln", (u,)))
        out = _ln_positive_rational(c) if c != 1 else ZERO
        for k, e in mono:
            out = out + _ln_kernel(k).scale(e)
        return out
    c, m, s = content(u)
    if c > 0 and (c != 1 or m != ONE):
        return ln_(Expr.num(c) * m) + Expr.kernel(Call("ln", (s,)))
    return Expr.kernel(Call("ln", (u,)))


def exp_(u) -> Expr:
    u = as_expr(u)
    if not u.terms:
        return ONE
    out = ONE
    rest: dict = {}
    for m, c in u.terms:
        if len(m) == 1 and m[0][1] == 1 and isinstance(m[0][0], Call) and m[0][0].builtin and m[0][0].name == "ln":
            out = out * (m[0][0].args[0] ** c)
        else:
            rest[m] = c
    if rest:
        arg = Expr._from_dict(rest)
        k = Call("exp", (arg,))
        mono = ((k, _ONE),)
        out = _mul(out, Expr(((mono, _ONE),)))
    return out


def sin_(u) -> Expr:
    u = as_expr(u)
    if not u.terms:
        return ZERO
    if u.terms[0][1] < 0:
        return -Expr.kernel(Call("sin", (-u,)))
    return Expr.kernel(Call("sin", (u,)))


def cos_(u) -> Expr:
    u = as_expr(u)
    if not u.terms:
        return ONE
    if u.terms[0][1] < 0:
        u = -u
    return Expr.kernel(Call("cos", (u,)))


def func(name: str, *args, orders: Iterable[int] | None = None) -> Expr:
    """Apply a built-in or opaque function to ``args``."""
    args = tuple(as_expr(a) for a in args)
    if orders is None and name in BUILTINS:
        if len(args) != 1:
            raise TypeError(f"{name} takes exactly one argument")
        return {"ln": ln_, "exp": exp_, "sin": sin_, "cos": cos_}[name](args[0])
    if orders is None:
        orders = (0,) * len(args)
    orders = tuple(int(o) for o in orders)
    if len(orders) != len(args):
        raise TypeError(f"{name}: {len(orders)} derivative orders for {len(args)} arguments")
    if any(o < 0 for o in orders):
        raise ValueError("derivative orders must be non-negative")
    return Expr.kernel(Call(name, args, orders))


def ln(u) -> Expr:
    return ln_(u)


def exp(u) -> Expr:
    return exp_(u)


def sin(u) -> Expr:
    return sin_(u)


def cos(u) -> Expr:
    return cos_(u)


# --------------------------------------------------------------------------- differentiation


@lru_cache(maxsize=65536)
def _dkernel(k: Kernel, x: str) -> Expr:
    if isinstance(k, Symbol):
        return ONE if k.name == x else ZERO
    if isinstance(k, Group):
        return diff(k.base, x)
    if k.builtin:
        u = k.args[0]
        du = diff(u, x)
        if du.is_zero:
            return ZERO
        if k.name == "ln":
            return du / u
        if k.name == "exp":
            return Expr.kernel(k) * du
        if k.name == "sin":
            return cos_(u) * du
        return -sin_(u) * du
    out = ZERO
    for j, a in enumerate(k.args):
        da = diff(a, x)
        if da.is_zero:
            continue
        orders = list(k.orders)
        orders[j] += 1
        out = out + Expr.kernel(Call(k.name, k.args, tuple(orders))) * da
    return out


@lru_cache(maxsize=65536)
def _depends(k: Kernel, x: str) -> bool:
    if isinstance(k, Symbol):
        return k.name == x
    if isinstance(k, Group):
        return x in _free_symbols(k.base)
    return any(x in _free_symbols(a) for a in k.args)


@lru_cache(maxsize=131072)
def diff(e: Expr, x: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to the symbol named ``x``."""
    if isinstance(x, Expr):
        x = x.name
    acc: dict = {}
    pending: list = []
    for mono, c in e.terms:
        for i, (k, ex) in enumerate(mono):
            if not _depends(k, x):
                continue
            dk = _dkernel(k, x)
            if dk.is_zero:
                continue
            kd = dict(mono)
            kd[k] = ex - 1
            part = _term_expr(c * ex, kd)
            pending.append(_mul(part, dk))
    for p in pending:
        for m, c in p.terms:
            acc[m] = acc.get(m, _ZERO) + c
    return Expr._from_dict(acc)


def diff_n(e: Expr, *xs: str) -> Expr:
    for x in xs:
        e = diff(e, x)
    return e


# --------------------------------------------------------------------------- substitution


def _rebuild_kernel(k: Kernel, fn) -> Expr:
    if isinstance(k, Symbol):
        return fn(k)
    if isinstance(k, Group):
        return _subs_walk(k.base, fn)
    args = tuple(_subs_walk(a, fn) for a in k.args)
    if k.builtin:
        return func(k.name, *args)
    return func(k.name, *args, orders=k.orders)


def _subs_walk(e: Expr, fn) -> Expr:
    acc = ZERO
    cache: dict = {}
    for mono, c in e.terms:
        term = Expr.num(c)
        for k, ex in mono:
            if k not in cache:
                cache[k] = _rebuild_kernel(k, fn)
            term = term * (cache[k] ** ex)
        acc = acc + term
    return acc


def subs(e: Expr, mapping: Mapping[str, object]) -> Expr:
    """Simultaneously replace symbols by expressions."""
    m = {str(k if not isinstance(k, Expr) else k.name): as_expr(v) for k, v in mapping.items()}
    if not m or not (e.free_symbols() & set(m)):
        return e

    def fn(k: Symbol) -> Expr:
        return m.get(k.name) if k.name in m else Expr.kernel(k)

    return _subs_walk(e, fn)


def substitute_functions(e: Expr, bodies: Mapping[str, object]) -> Expr:
    """Replace opaque function applications ``f(args)`` by a symbolic body.

    ``bodies[name]`` is a callable ``(args, orders) -> Expr``.
    """

    def walk(x: Expr) -> Expr:
        acc = ZERO
        for mono, c in x.terms:
            term = Expr.num(c)
            for k, ex in mono:
                if isinstance(k, Symbol):
                    val = Expr.kernel(k)
                elif isinstance(k, Group):
                    val = walk(k.base)
                else:
                    args = tuple(walk(a) for a in k.args)
                    if not k.builtin and k.name in bodies:
                        val = as_expr(bodies[k.name](args, k.orders))
                    elif k.builtin:
                        val = func(k.name, *args)
                    else:
                        val = func(k.name, *args, orders=k.orders)
                term = term * (val ** ex)
            acc = acc + term
        return acc

    return walk(e)
