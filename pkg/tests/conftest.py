"""Shared pytest wiring for the test suite.

The acceptance tests record a one-line verdict per criterion; the hook below
prints those lines in a dedicated section of the terminal summary so the
pass/fail status of every criterion is visible in one place.
"""

from __future__ import annotations

import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Return a callable that records a one-line verdict for the summary."""

    def note(line: str) -> None:
        _ACCEPTANCE_LINES.append(line)

    return note


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
