"""Exact symbolic scalar expressions."""
from __future__ import annotations

from .core import (
    BUILTINS,
    ONE,
    ZERO,
    Call,
    Expr,
    Group,
    Symbol,
    as_expr,
    content,
    cos,
    diff,
    diff_n,
    exp,
    func,
    ln,
    sin,
    subs,
    substitute_functions,
    sym,
    symbols,
)
from .evaluate import ExpSumBody, FunctionBodies, eval_array, eval_at
from .parse import parse_expr
from .printing import to_string
from .zero import (
    EPS_ZERO,
    SAMPLES,
    Domain,
    ZeroResult,
    ZeroStatus,
    cancel,
    clear_denominators,
    divide_exact,
    equals_zero,
    simplify,
)

__all__ = [
    "BUILTINS", "ONE", "ZERO", "Call", "Expr", "Group", "Symbol", "as_expr", "content", "cos", "diff",
    "diff_n", "exp", "func", "ln", "sin", "subs", "substitute_functions", "sym", "symbols",
    "ExpSumBody", "FunctionBodies", "eval_array", "eval_at", "parse_expr", "to_string",
    "EPS_ZERO", "SAMPLES", "Domain", "ZeroResult", "ZeroStatus", "cancel", "clear_denominators",
    "divide_exact", "equals_zero", "simplify",
]
