import pytest

# Filled by the acceptance tests; printed once at the end of the session.
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def acceptance_report():
    def record(key: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES[key] = f"{'PASS' if ok else 'FAIL'}  {key}: {detail}"
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
