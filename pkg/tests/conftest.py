"""Collects the one-line acceptance verdicts and repeats them in the summary."""

import pytest

VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    def record(number: int, name: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {name}: {detail}"
        print(line)
        VERDICTS.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
