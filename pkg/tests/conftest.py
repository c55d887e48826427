"""Shared pytest infrastructure.

The acceptance tests (tests/test_acceptance.py) register a one-line
PASS/FAIL verdict per criterion through the ``acceptance`` fixture; the
``pytest_terminal_summary`` hook replays those lines after the run so they
survive pytest's per-test output capture.
"""

import pytest

_ACCEPTANCE_LINES = {}


def _format_line(number, name, passed, detail):
    status = "PASS" if passed else "FAIL"
    line = f"ACCEPTANCE {number:2d} {name}: {status}"
    if detail:
        line += f"  [{detail}]"
    return line


@pytest.fixture
def acceptance():
    """Record (and print) the verdict line for one acceptance criterion."""

    def record(number, name, passed, detail=""):
        passed = bool(passed)
        line = _format_line(number, name, passed, detail)
        _ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])
