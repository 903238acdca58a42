"""Shared pieces of the case-study reports and their spec files."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ParseError
from ..expr import Expr, parse_expr


@dataclass
class CaseReport:
    name: str
    verdicts: list = field(default_factory=list)
    expressions: dict = field(default_factory=dict)
    numeric_checks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    objects: dict = field(default_factory=dict)

    def verdict(self, name: str, status: str, **detail) -> None:
        entry = {"name": name, "status": status}
        entry.update({k: v for k, v in detail.items() if v is not None})
        self.verdicts.append(entry)

    def status_of(self, name: str) -> str | None:
        for v in self.verdicts:
            if v["name"] == name:
                return v["status"]
        return None

    def expr(self, name: str, value) -> None:
        self.expressions[name] = str(value)


def parse_specfile(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; keys must be unique."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, value = line.split("=", 1)
        key = key.strip()
        if not key.replace("_", "").isalnum():
            raise ParseError(f"invalid key {key!r}", lineno, 1)
        if key in out:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        out[key] = (value.strip(), lineno, raw.index("=") + 2)
    return out


def spec_expr(spec: dict, key: str, default: str | None = None) -> Expr:
    if key not in spec:
        if default is None:
            raise ParseError(f"missing key {key!r}")
        return parse_expr(default)
    text, line, col = spec[key]
    return parse_expr(text, line, col)


def spec_str(spec: dict, key: str, default: str | None = None) -> str:
    if key not in spec:
        if default is None:
            raise ParseError(f"missing key {key!r}")
        return default
    return spec[key][0]


def split_tuple(text: str) -> list:
    """Split ``(a, f(b, c), d)`` at top-level commas."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur.strip())
    return parts


def spec_vector(spec: dict, key: str, size: int, default: str | None = None) -> list:
    if key not in spec and default is not None:
        text, line = default, 0
    elif key not in spec:
        raise ParseError(f"missing key {key!r}")
    else:
        text, line, _ = spec[key]
    parts = split_tuple(text)
    if len(parts) > size:
        raise ParseError(f"{key} has {len(parts)} components, at most {size} allowed", max(line, 1), 1)
    vals = [parse_expr(p, max(line, 1)) for p in parts]
    return vals + [Expr.num(0)] * (size - len(vals))


def spec_names(spec: dict, key: str, default: str) -> list:
    return [p.strip() for p in split_tuple(spec_str(spec, key, default))]
