import pytest

from helpers import ACCEPTANCE_LINES
from trifocal.counterexample import counterexample_tensor


@pytest.fixture(scope="session")
def counter_T():
    return counterexample_tensor()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
