import pytest

_LINES = {}


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, seconds: float, limit: float) -> None:
        within = seconds <= limit
        status = "PASS" if ok and within else "FAIL"
        line = f"criterion {number}: {status}  {title}  ({seconds:.2f}s, limit {limit:g}s)"
        _LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
