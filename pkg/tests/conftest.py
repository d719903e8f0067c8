import pytest

from qrt import Tournament, build_paley, transitive_tournament


@pytest.fixture
def three_cycle():
    return Tournament.from_edges(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def paley7():
    return build_paley(7)


@pytest.fixture
def transitive3():
    return transitive_tournament(3)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
