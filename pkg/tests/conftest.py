import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    """``criterion(n, ok, detail)`` records and prints one pass/fail line, then asserts ``ok``."""

    def record(n: int, ok: bool, detail: str = "") -> None:
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _ACCEPTANCE[n] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])


def pytest_runtest_logreport(report):
    # a criterion test that raised before recording still gets its FAIL line
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call" and report.failed and name.startswith("test_criterion_"):
        n = int(name.split("_")[2])
        if n not in _ACCEPTANCE or "PASS" in _ACCEPTANCE[n]:
            _ACCEPTANCE[n] = f"criterion {n:>2}: FAIL  raised {report.longrepr.reprcrash.message if hasattr(report.longrepr, 'reprcrash') else 'an error'}"
