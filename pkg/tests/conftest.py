import pytest

from qsymfilt.fleet import build_fleet

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fleet():
    return build_fleet()


@pytest.fixture(scope="session")
def kplus_fleet(fleet):
    return [inst for inst in fleet if inst.kplus]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
