"""Shared fixtures: the acceptance-criteria report.

Acceptance tests record one line per criterion; the lines are echoed into the
terminal summary so a plain `pytest -v` run ends with the full scoreboard.
"""

import pytest

_CRITERION_LINES: list[str] = []


class CriteriaReport:
    def record(self, name: str, passed: bool, detail: str = "") -> bool:
        line = f"[{'PASS' if passed else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        _CRITERION_LINES.append(line)
        print(line)
        return passed


@pytest.fixture()
def criteria() -> CriteriaReport:
    return CriteriaReport()


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
