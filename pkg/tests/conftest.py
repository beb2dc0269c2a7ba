"""Shared test plumbing.

The acceptance tests record one line per numbered check; the terminal
summary hook prints them all at the end of the run, pass or fail, so the
verdicts stay visible even when pytest captures stdout.
"""

import pytest

_criterion_lines: list[str] = []


@pytest.fixture
def criterion():
    def record(number, ok: bool, detail: str = "") -> bool:
        tag = "PASS" if ok else "FAIL"
        line = f"[criterion {number}] {tag}"
        if detail:
            line += f": {detail}"
        _criterion_lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
