from __future__ import annotations

import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parents[1]

# acceptance criterion number -> (passed, detail)
ACCEPTANCE: dict = {}


@pytest.fixture
def specs_dir() -> Path:
    return ROOT / "specs"


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[number] = (bool(ok), detail)
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return record


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_c(\d+)", report.nodeid)
    if m and report.when == "call" and report.failed:
        n = int(m.group(1))
        if n not in ACCEPTANCE:
            ACCEPTANCE[n] = (False, "raised before reporting: " + report.longreprtext.strip().splitlines()[-1])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
