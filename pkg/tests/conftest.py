"""Shared pytest plumbing: collects acceptance verdicts for the run summary."""

ACCEPT_LINES = []


def record_criterion(tag: str, ok: bool, detail: str) -> None:
    ACCEPT_LINES.append(f"{'PASS' if ok else 'FAIL'} {tag}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPT_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPT_LINES:
        terminalreporter.write_line(line)
