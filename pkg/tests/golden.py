"""The golden CLI suite: every subcommand, run against the shipped specs."""
from __future__ import annotations

import io
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SPECS = ROOT / "specs"
WS = str(SPECS / "workspace.forms")

GOLDEN = [
    ["form", "d", "w", "-w", WS],
    ["form", "closed", "w", "-w", WS],
    ["form", "closed", "winding", "-w", WS],
    ["form", "potential", "w", "-w", WS, "--base", "(1, 1)"],
    ["form", "commutator", "v", "--connection", "T", "-w", WS],
    ["relation", "classify", "first_law", "-w", WS],
    ["relation", "frobenius", "first_law", "-w", WS],
    ["relation", "factor", "r", "-w", WS],
    ["relation", "loci", "r", "-w", WS],
    ["relation", "restrict", "r", "--on", "{ x = 0 }", "-w", WS],
    ["relation", "restrict", "em", "--on", "(t) -> (l1 = c*t + k, t)", "-w", WS],
    ["relation", "descend", "exact", "-w", WS],
    ["geometry", "report", "g", "-w", WS],
    ["geometry", "report", "T", "-w", WS],
    ["classify", "--p", "3", "--k", "3", "--n", "3"],
    ["case", "thermo", str(SPECS / "thermo.spec")],
    ["case", "gas", str(SPECS / "gas_nonideal.spec")],
    ["case", "em", str(SPECS / "em_sources.spec")],
    ["case", "maxwell", str(SPECS / "maxwell.spec")],
    ["case", "hamiltonian", str(SPECS / "hamiltonian.spec")],
    ["--verify-numeric", "case", "thermo", str(SPECS / "thermo.spec")],
    ["--verify-numeric", "relation", "classify", "first_law", "-w", WS],
]


def run_all() -> dict:
    from evoforms.cli import run

    out = {}
    for argv in GOLDEN:
        buf = io.StringIO()
        code = run(["--json", *argv], out=buf, err=io.StringIO())
        out[" ".join(argv)] = [code, buf.getvalue()]
    return out


if __name__ == "__main__":
    json.dump(run_all(), sys.stdout)
