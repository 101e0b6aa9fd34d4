"""Shared pytest hooks.

Collects the per-criterion verdict lines emitted by the acceptance tests
and prints them in the terminal summary, outside output capture, so every
run log shows one pass/fail line per criterion.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_lines):
            terminalreporter.write_line(line)
