import time

import pytest

from pcrank import from_weights, new_pc_matrix
from pcrank.montecarlo import McConfig, run_experiment

INCONSISTENT_3 = [[1, 2, 8], [1 / 2, 1, 2], [1 / 8, 1 / 2, 1]]


@pytest.fixture
def consistent631():
    return from_weights((0.6, 0.3, 0.1))


@pytest.fixture
def inconsistent3():
    return new_pc_matrix(INCONSISTENT_3)


@pytest.fixture(scope="session")
def mc_default():
    """The full-size 3x3 study (250 bases x 1451 betas) and its wall time."""
    start = time.perf_counter()
    result = run_experiment(McConfig())
    return result, time.perf_counter() - start


@pytest.fixture(scope="session")
def mc_4x4():
    return run_experiment(McConfig(n=4))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
