"""Zero testing, denominator clearing and exact cancellation.

``equals_zero`` first tries to prove a difference is zero symbolically
(canonical form, then clearing grouped denominators, then the Pythagorean
rewrite) and only then falls back to evaluation at fixed-seed random rational
points of a :class:`Domain`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import ConfigurationError, EvaluationError
from .core import ONE, ZERO, Call, Expr, Group, _term_expr, cos_
from .evaluate import FunctionBodies, eval_at

EPS_ZERO = 1e-9
SAMPLES = 32
DEFAULT_INTERVAL = (Fraction(1, 2), Fraction(2))


@dataclass(frozen=True)
class Domain:
    """Axis-aligned sampling box with optional excluded points.

    ``box`` maps symbol names to closed intervals.  Symbols that are not in
    the box use ``default`` (a positive interval) unless ``default`` is None,
    in which case sampling them is a configuration error.  ``coords`` fixes
    the coordinate order used by ``exclude`` and ``base``.
    """

    box: tuple = ()
    coords: tuple = ()
    exclude: tuple = ()
    base: tuple | None = None
    default: tuple | None = DEFAULT_INTERVAL
    seed: int = 0

    @staticmethod
    def make(box: Mapping[str, Sequence] | None = None, coords: Sequence[str] = (), exclude=(), base=None,
             default=DEFAULT_INTERVAL, seed: int = 0) -> "Domain":
        items = tuple(sorted((k, Fraction(v[0]), Fraction(v[1])) for k, v in (box or {}).items()))
        for name, lo, hi in items:
            if lo > hi:
                raise ConfigurationError(f"empty interval for {name}")
        ex = tuple(tuple(Fraction(x) for x in p) for p in exclude)
        b = tuple(Fraction(x) for x in base) if base is not None else None
        dflt = (Fraction(default[0]), Fraction(default[1])) if default is not None else None
        return Domain(items, tuple(coords), ex, b, dflt, seed)

    def interval(self, name: str) -> tuple:
        for n, lo, hi in self.box:
            if n == name:
                return lo, hi
        if self.default is None:
            raise ConfigurationError(f"no sampling interval declared for symbol {name!r}")
        return self.default

    def has(self, name: str) -> bool:
        return any(n == name for n, _, _ in self.box)

    def with_seed(self, seed: int) -> "Domain":
        return Domain(self.box, self.coords, self.exclude, self.base, self.default, seed)

    def excluded_inside(self) -> list:
        """Excluded points that lie inside the closed box."""
        out = []
        for p in self.exclude:
            inside = True
            for name, x in zip(self.coords, p):
                lo, hi = self.interval(name)
                if not lo <= x <= hi:
                    inside = False
            if inside:
                out.append(p)
        return out

    def is_excluded(self, point: Mapping[str, Fraction]) -> bool:
        for p in self.exclude:
            if all(point.get(n) == x for n, x in zip(self.coords, p)):
                return True
        return False

    def sample(self, names: Sequence[str], rng: random.Random) -> dict:
        point = {}
        for n in sorted(names):
            lo, hi = self.interval(n)
            point[n] = lo + (hi - lo) * Fraction(rng.randrange(1, 1024), 1024)
        return point


class ZeroStatus(str, Enum):
    PROVED_ZERO = "proved_zero"
    NUMERICALLY_ZERO = "numerically_zero"
    NONZERO = "nonzero"


@dataclass(frozen=True)
class ZeroResult:
    status: ZeroStatus
    witness: dict | None = None
    value: object = None
    method: str = ""
    details: dict = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.status is not ZeroStatus.NONZERO

    @property
    def proved(self) -> bool:
        return self.status is ZeroStatus.PROVED_ZERO

    def __bool__(self) -> bool:
        return self.is_zero


# --------------------------------------------------------------------------- symbolic steps


def times_kernel_power(e: Expr, k, power: Fraction) -> Expr:
    """Multiply by ``k^power`` merging exponents before normalizing."""
    power = Fraction(power)
    acc = ZERO
    parts = []
    for mono, c in e.terms:
        kd = dict(mono)
        kd[k] = kd.get(k, Fraction(0)) + power
        parts.append(_term_expr(c, kd))
    for p in parts:
        acc = acc + p
    return acc


def denominators(e: Expr) -> dict:
    """Grouped sums appearing with negative integer exponents, with max depth."""
    out: dict = {}
    for mono, _ in e.terms:
        for k, ex in mono:
            if isinstance(k, Group) and ex < 0 and ex.denominator == 1 and len(k.base.terms) > 1:
                out[k] = max(out.get(k, 0), -int(ex))
    return out


def clear_denominators(e: Expr, rounds: int = 4) -> Expr:
    for _ in range(rounds):
        dens = denominators(e)
        if not dens:
            break
        for k in sorted(dens, key=lambda g: g.key):
            e = times_kernel_power(e, k, dens[k])
    return e


def pythagorean(e: Expr) -> Expr:
    """Rewrite sin(u)^n (n >= 2) as sin(u)^(n mod 2) * (1 - cos(u)^2)^(n div 2)."""
    changed = False
    acc = ZERO
    for mono, c in e.terms:
        kd = {}
        extra = ONE
        for k, ex in mono:
            if isinstance(k, Call) and k.builtin and k.name == "sin" and ex.denominator == 1 and ex >= 2:
                n = int(ex)
                changed = True
                if n % 2:
                    kd[k] = Fraction(1)
                extra = extra * (ONE - cos_(k.args[0]) ** 2) ** (n // 2)
            else:
                kd[k] = ex
        acc = acc + _term_expr(c, kd) * extra
    return acc if changed else e


def symbolic_zero(e: Expr, use_pythagorean: bool = True) -> bool:
    if e.is_zero:
        return True
    r = clear_denominators(e)
    if r.is_zero:
        return True
    if use_pythagorean:
        r2 = pythagorean(r)
        if r2 is not r and clear_denominators(r2).is_zero:
            return True
    return False


def equals_zero(e: Expr, domain: Domain | None = None, bodies: FunctionBodies | None = None,
                samples: int = SAMPLES, eps: float = EPS_ZERO, use_pythagorean: bool = True) -> ZeroResult:
    """Tri-state zero test: proved_zero, numerically_zero or nonzero(witness)."""
    if e.is_zero:
        return ZeroResult(ZeroStatus.PROVED_ZERO, method="canonical")
    if symbolic_zero(e, use_pythagorean):
        return ZeroResult(ZeroStatus.PROVED_ZERO, method="cleared")
    domain = domain or Domain()
    names = sorted(e.free_symbols())
    for n in names:
        domain.interval(n)  # configuration check before sampling
    rng = random.Random(domain.seed)
    bodies = bodies or FunctionBodies(seed=domain.seed)
    good = 0
    attempts = 0
    worst = 0.0
    while good < samples and attempts < samples * 8:
        attempts += 1
        point = domain.sample(names, rng)
        if domain.is_excluded(point):
            continue
        try:
            v = eval_at(e, point, bodies)
        except EvaluationError:
            continue
        good += 1
        mag = abs(float(v))
        if mag > eps and not (not isinstance(v, Fraction) and mag <= eps * _scale(e, point, bodies)):
            return ZeroResult(ZeroStatus.NONZERO, witness=point, value=v, method="sampled")
        worst = max(worst, mag)
    if good == 0:
        raise ConfigurationError("no evaluable sample point found in the domain")
    return ZeroResult(ZeroStatus.NUMERICALLY_ZERO, method="sampled", details={"points": good, "max_abs": worst})


def _scale(e: Expr, point, bodies) -> float:
    """Sum of absolute term values, used to scale the float rounding tolerance."""
    total = 0.0
    for mono, c in e.terms:
        try:
            total += abs(float(eval_at(Expr(((mono, c),)), point, bodies)))
        except EvaluationError:
            return 1.0
    return max(1.0, total)


# --------------------------------------------------------------------------- exact division


def _poly(e: Expr, order: list) -> dict | None:
    """Exponent-vector dictionary; None when an exponent is not a non-negative integer."""
    idx = {k: i for i, k in enumerate(order)}
    out = {}
    for mono, c in e.terms:
        vec = [0] * len(order)
        for k, ex in mono:
            if ex.denominator != 1 or ex < 0:
                return None
            vec[idx[k]] = int(ex)
        out[tuple(vec)] = c
    return out


def _unpoly(p: dict, order: list) -> Expr:
    acc = ZERO
    for vec, c in p.items():
        kd = {order[i]: Fraction(x) for i, x in enumerate(vec) if x}
        acc = acc + _term_expr(c, kd)
    return acc


def divide_exact(n: Expr, d: Expr) -> Expr | None:
    """Exact quotient n/d as Laurent polynomials in their kernels, or None."""
    if d.is_zero:
        return None
    if n.is_zero:
        return ZERO
    if len(d.terms) == 1:
        return n * (d ** -1)
    from .core import content

    cn, mn, sn = content(n)
    cd, md, sd = content(d)
    order = sorted(sn.kernels() | sd.kernels(), key=lambda k: k.key)
    pn = _poly(sn, order)
    pd = _poly(sd, order)
    if pn is None or pd is None:
        return None
    lt_d = max(pd)
    lc_d = pd[lt_d]
    q: dict = {}
    r = dict(pn)
    steps = 0
    while r:
        steps += 1
        if steps > 20000:
            return None
        lt = max(r)
        if any(a < b for a, b in zip(lt, lt_d)):
            return None
        shift = tuple(a - b for a, b in zip(lt, lt_d))
        coef = r[lt] / lc_d
        q[shift] = q.get(shift, Fraction(0)) + coef
        for vec, c in pd.items():
            key = tuple(a + b for a, b in zip(vec, shift))
            v = r.get(key, Fraction(0)) - coef * c
            if v == 0:
                r.pop(key, None)
            else:
                r[key] = v
    return _unpoly(q, order) * Expr.num(cn / cd) * mn * (md ** -1)


def cancel(e: Expr) -> Expr:
    """Cancel grouped denominators against the numerator where division is exact."""
    dens = denominators(e)
    if not dens:
        return e
    n = e
    for k in sorted(dens, key=lambda g: g.key):
        n = times_kernel_power(n, k, dens[k])
    remaining = {}
    for k in sorted(dens, key=lambda g: g.key):
        left = dens[k]
        while left > 0:
            q = divide_exact(n, k.base)
            if q is None:
                break
            n = q
            left -= 1
        remaining[k] = left
    out = n
    for k in sorted(remaining, key=lambda g: g.key):
        if remaining[k]:
            out = times_kernel_power(out, k, -remaining[k])
    return out


def simplify(e: Expr, domain: Domain | None = None) -> Expr:
    """Canonical zero for provable zeros, otherwise the cancelled form."""
    if symbolic_zero(e):
        return ZERO
    return cancel(e)
