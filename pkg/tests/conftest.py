import pytest

CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one verdict line per acceptance criterion, then assert it."""

    def record(number: int, passed: bool, detail: str) -> None:
        CRITERIA[number] = f"CRITERION {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        assert passed, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])
