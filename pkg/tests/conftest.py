import pytest

from mvwave.reffun import DisplayConfig

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def cfg():
    return DisplayConfig()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
