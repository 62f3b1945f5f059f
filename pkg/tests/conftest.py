import pytest

from hvdw.atomic import BoundState
from hvdw.interaction import PairSpec

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pair_12d():
    return PairSpec(BoundState(12, 2))


@pytest.fixture(scope="session")
def pair_1s():
    return PairSpec(BoundState(1, 0))
