"""Shared pytest plumbing.

Collects the acceptance-gate result lines so the terminal summary shows
one pass/fail line per criterion even when output capture is on.
"""

CRITERIA_LINES: list[str] = []


def record_criterion(line: str) -> None:
    """Register one criterion result line and echo it immediately."""
    CRITERIA_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERIA_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
