"""Shared test plumbing: collects acceptance-criterion outcomes and prints
one PASS/FAIL line per criterion at the end of the run."""
from __future__ import annotations

_ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []


def record_criterion(index: int, title: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE_RESULTS.append((index, title, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for index, title, passed, detail in sorted(_ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {index}: {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
