import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance(capsys):
    """Print one criterion line past output capture and keep it for the summary."""

    def emit(line: str) -> None:
        _ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
