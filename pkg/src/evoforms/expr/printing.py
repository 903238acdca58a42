"""Printing in the input grammar, so that ``parse_expr(to_string(e)) == e``."""
from __future__ import annotations

from fractions import Fraction

from .core import Call, Expr, Group, Kernel, Symbol


def _exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def kernel_string(k: Kernel) -> str:
    if isinstance(k, Symbol):
        return k.name
    if isinstance(k, Call):
        args = ", ".join(to_string(a) for a in k.args)
        if k.builtin or not any(k.orders):
            return f"{k.name}({args})"
        if len(k.orders) == 1:
            return f"{k.name}{chr(39) * k.orders[0]}({args})"
        marks = ",".join(str(o) for o in k.orders)
        return f"{k.name}'[{marks}]({args})"
    base = k.base
    if len(base.terms) == 1 and base.terms[0][0] == () and base.terms[0][1] > 0:
        c = base.terms[0][1]
        return str(c.numerator) if c.denominator == 1 else f"({c})"
    return f"({to_string(base)})"


def _power_string(k: Kernel, e: Fraction) -> str:
    s = kernel_string(k)
    return s if e == 1 else f"{s}^{_exponent(e)}"


def term_string(mono: tuple, c: Fraction) -> tuple:
    """Return ``(negative, text)`` for one term with its sign split off."""
    neg = c < 0
    c = abs(c)
    num = []
    den = []
    grouped = []
    for k, e in mono:
        if e > 0:
            num.append(_power_string(k, e))
        elif isinstance(k, Group) and len(k.base.terms) > 1 and e.denominator == 1:
            grouped.append((k, e))
        else:
            den.append(_power_string(k, -e))
    # "a/(s*t)" would multiply s*t out before inverting, so grouped sums only
    # use the "/" form when they are the sole denominator factor
    if len(grouped) == 1 and grouped[0][1] == -1 and not den and c.denominator == 1:
        den.append(kernel_string(grouped[0][0]))
    else:
        num.extend(f"{kernel_string(k)}^{e.numerator}" for k, e in grouped)
    if c.numerator != 1 or not num:
        num.insert(0, str(c.numerator))
    if c.denominator != 1:
        den.insert(0, str(c.denominator))
    text = "*".join(num)
    if den:
        d = "*".join(den)
        text += "/" + (f"({d})" if len(den) > 1 else d)
    return neg, text


def to_string(e: Expr) -> str:
    if not e.terms:
        return "0"
    parts = []
    for i, (mono, c) in enumerate(e.terms):
        neg, text = term_string(mono, c)
        if i == 0:
            parts.append(("-" if neg else "") + text)
        else:
            parts.append((" - " if neg else " + ") + text)
    return "".join(parts)


def coefficient_string(e: Expr) -> tuple:
    """Sign and text of ``e`` used as a multiplier in front of a basis element.

    Returns ``(negative, text)`` where text is None for a unit coefficient.
    """
    if len(e.terms) == 1:
        mono, c = e.terms[0]
        if not mono and abs(c) == 1:
            return c < 0, None
        neg, text = term_string(mono, c)
        if "/" in text:
            text = f"({text})"
        return neg, text
    return False, f"({to_string(e)})"
