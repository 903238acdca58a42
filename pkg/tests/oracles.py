"""Independent oracles built on sympy; never imported by the package."""
from __future__ import annotations

import sympy as sp

LOCALS = {"ln": sp.log, "exp": sp.exp, "sin": sp.sin, "cos": sp.cos}


def to_sympy(e) -> sp.Expr:
    """Parse printed engine output; symbols are positive, as in the engine."""
    out = sp.sympify(str(e).replace("^", "**"), locals=LOCALS)
    return out.subs({s: sp.Symbol(s.name, positive=True) for s in out.free_symbols})


def christoffel(g: sp.Matrix, xs) -> dict:
    """G[r][m][n] = 1/2 g^{rl} (d_m g_{ln} + d_n g_{lm} - d_l g_{mn})."""
    n = len(xs)
    ginv = g.inv()
    out = {}
    for r in range(n):
        for m in range(n):
            for k in range(n):
                v = sum(ginv[r, l] * (sp.diff(g[l, k], xs[m]) + sp.diff(g[l, m], xs[k]) - sp.diff(g[m, k], xs[l]))
                        for l in range(n)) / 2
                out[(r, m, k)] = sp.simplify(v)
    return out


def riemann(gamma: dict, xs) -> dict:
    """R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}."""
    n = len(xs)
    out = {}
    for r in range(n):
        for s in range(n):
            for m in range(n):
                for k in range(n):
                    v = sp.diff(gamma[(r, k, s)], xs[m]) - sp.diff(gamma[(r, m, s)], xs[k])
                    v += sum(gamma[(r, m, l)] * gamma[(l, k, s)] - gamma[(r, k, l)] * gamma[(l, m, s)]
                             for l in range(n))
                    out[(r, s, m, k)] = sp.simplify(v)
    return out


def same(a, b) -> bool:
    return sp.simplify(to_sympy(a) - b) == 0
