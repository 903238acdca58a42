"""Report assembly and rendering (JSON or plain text)."""
from __future__ import annotations

import json
from enum import Enum
from fractions import Fraction
from importlib import resources


def new_report(command: str, inputs: dict | None = None) -> dict:
    return {"command": command, "inputs": dict(inputs or {}), "verdicts": [], "expressions": {},
            "numeric_checks": [], "warnings": []}


def jsonable(v):
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return str(v)


def add_verdict(report: dict, name: str, status: str, **detail) -> None:
    entry = {"name": name, "status": jsonable(status)}
    entry.update({k: jsonable(v) for k, v in detail.items() if v is not None and v != ""})
    report["verdicts"].append(entry)


def add_expr(report: dict, name: str, value) -> None:
    report["expressions"][name] = str(value)


def schema() -> dict:
    text = resources.files("evoforms.cli").joinpath("report_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def to_json(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _detail(entry: dict) -> str:
    rest = {k: v for k, v in entry.items() if k not in ("name", "status")}
    if not rest:
        return ""
    return " (" + ", ".join(f"{k}={json.dumps(v, sort_keys=True, ensure_ascii=False) if not isinstance(v, str) else v}"
                            for k, v in sorted(rest.items())) + ")"


def to_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for key in ("interaction", "pseudostructure_dim", "metric_dim"):
        if key in report:
            lines.append(f"{key}: {report[key]}")
    for v in report["verdicts"]:
        lines.append(f"[{v['status']}] {v['name']}{_detail(v)}")
    for name, text in report["expressions"].items():
        lines.append(f"{name} = {text}")
    for c in report["numeric_checks"]:
        lines.append(f"numeric {c['name']}: {c['status']}{_detail({k: v for k, v in c.items() if k != 'name'})}")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    if "error" in report:
        lines.append(f"error: {report['error']}")
    return "\n".join(lines) + "\n"
