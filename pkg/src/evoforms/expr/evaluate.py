"""Numeric evaluation of expressions.

``eval_at`` keeps rational arithmetic exact as long as no transcendental value
is involved; ``eval_array`` evaluates over numpy arrays for grid work.  Opaque
functions need numeric bodies: a :class:`FunctionBodies` maps names to
callables ``(args, orders) -> value``.  When no body is given, a deterministic
smooth stand-in (a short sum of exponentials seeded by the function name) is
used, so formal derivative orders evaluate consistently.
"""
from __future__ import annotations

import math
import zlib
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from ..errors import DivisionByZero, Singularity, UnboundSymbol
from .core import Call, Expr, Group, Symbol, _rational_power

Value = "Fraction | float | np.ndarray"


class ExpSumBody:
    """f(u) = sum_j a_j * exp(sum_i b_ji * u_i) with derivatives in closed form."""

    def __init__(self, name: str, nargs: int, seed: int = 0, terms: int = 3):
        rng = np.random.default_rng(zlib.crc32(name.encode()) ^ (seed * 7919))
        self.a = rng.uniform(0.5, 1.5, size=terms)
        self.b = rng.uniform(-1.0, 1.0, size=(terms, nargs))

    def __call__(self, args, orders):
        total = 0.0
        for j in range(len(self.a)):
            expo = 0.0
            factor = self.a[j]
            for i, u in enumerate(args):
                expo = expo + self.b[j, i] * u
                if orders[i]:
                    factor = factor * self.b[j, i] ** orders[i]
            total = total + factor * np.exp(expo)
        return total


class FunctionBodies:
    """Numeric bodies for opaque functions, with seeded defaults."""

    def __init__(self, bodies: Mapping[str, Callable] | None = None, seed: int = 0):
        self.bodies = dict(bodies or {})
        self.seed = seed
        self._default: dict = {}

    def __call__(self, name: str, args, orders):
        body = self.bodies.get(name)
        if body is None:
            key = (name, len(args))
            if key not in self._default:
                self._default[key] = ExpSumBody(name, len(args), self.seed)
            body = self._default[key]
        return body(args, orders)


def _to_float(v):
    return float(v) if isinstance(v, Fraction) else v


class _Evaluator:
    def __init__(self, bindings: Mapping[str, object], bodies: FunctionBodies | None, array: bool):
        self.b = bindings
        self.bodies = bodies or FunctionBodies()
        self.array = array
        self.cache: dict = {}

    def expr(self, e: Expr):
        total = 0.0 if self.array else Fraction(0)
        for mono, c in e.terms:
            term = float(c) if self.array else c
            for k, ex in mono:
                term = term * self.power(self.kernel(k), ex)
            total = total + term
        return total

    def power(self, v, ex: Fraction):
        if self.array:
            v = np.asarray(v, dtype=float)
            if ex < 0 and np.any(v == 0):
                raise DivisionByZero("division by zero in evaluation")
            if ex.denominator != 1:
                if np.any(v < 0):
                    raise Singularity("fractional power of a negative value")
                return np.power(v, float(ex))
            return np.power(v, int(ex)) if ex > 0 else 1.0 / np.power(v, -int(ex))
        if v == 0 and ex < 0:
            raise DivisionByZero("division by zero in evaluation")
        if isinstance(v, Fraction):
            r = _rational_power(v, ex)
            if r is not None:
                return r
        if v < 0 and ex.denominator != 1:
            raise Singularity("fractional power of a negative value")
        return float(v) ** float(ex)

    def kernel(self, k):
        if k in self.cache:
            return self.cache[k]
        if isinstance(k, Symbol):
            if k.name not in self.b:
                raise UnboundSymbol(f"symbol {k.name!r} is not bound")
            v = self.b[k.name]
            if not self.array and isinstance(v, int):
                v = Fraction(v)
            if not self.array and isinstance(v, float) and v.is_integer():
                v = Fraction(int(v))
        elif isinstance(k, Group):
            v = self.expr(k.base)
        elif k.builtin:
            v = self.builtin(k.name, self.expr(k.args[0]))
        else:
            args = [_to_float(self.expr(a)) for a in k.args]
            v = self.bodies(k.name, args, k.orders)
        self.cache[k] = v
        return v

    def builtin(self, name: str, u):
        if self.array:
            u = np.asarray(u, dtype=float)
            if name == "ln":
                if np.any(u <= 0):
                    raise Singularity("ln of a non-positive value")
                return np.log(u)
            return {"exp": np.exp, "sin": np.sin, "cos": np.cos}[name](u)
        if name == "ln":
            if u <= 0:
                raise Singularity("ln of a non-positive value")
            return Fraction(0) if u == 1 else math.log(u)
        if u == 0:
            return Fraction(1) if name in ("exp", "cos") else Fraction(0)
        return {"exp": math.exp, "sin": math.sin, "cos": math.cos}[name](float(u))


def eval_at(e: Expr, bindings: Mapping[str, object], bodies: FunctionBodies | None = None):
    """Evaluate at a point; exact Fraction when possible, otherwise float."""
    missing = e.free_symbols() - set(bindings)
    if missing:
        raise UnboundSymbol(f"unbound symbol(s): {', '.join(sorted(missing))}")
    conv = {}
    for k, v in bindings.items():
        if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
            conv[k] = Fraction(v)
        else:
            conv[k] = v
    return _Evaluator(conv, bodies, array=False).expr(e)


def eval_array(e: Expr, env: Mapping[str, object], bodies: FunctionBodies | None = None, shape=None) -> np.ndarray:
    """Vectorized float evaluation; ``env`` values are arrays or scalars."""
    missing = e.free_symbols() - set(env)
    if missing:
        raise UnboundSymbol(f"unbound symbol(s): {', '.join(sorted(missing))}")
    conv = {k: np.asarray(v, dtype=float) for k, v in env.items()}
    out = _Evaluator(conv, bodies, array=True).expr(e)
    out = np.asarray(_to_float(out), dtype=float)
    if shape is not None:
        out = np.broadcast_to(out, shape).copy()
    return out
