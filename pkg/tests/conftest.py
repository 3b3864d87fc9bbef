import numpy as np
import pytest

from ggsp.graphon import cayley_to_step, s3_example_gamma
from ggsp.groups import symmetric_group
from ggsp.reps import ranking_generating_set, young_orthogonal_irreps


@pytest.fixture(scope="session")
def s3_step():
    return cayley_to_step(s3_example_gamma())


@pytest.fixture(scope="session")
def s4():
    return symmetric_group(4)


@pytest.fixture(scope="session")
def s4_irreps(s4):
    return young_orthogonal_irreps(4, s4)


@pytest.fixture(scope="session")
def ranking_S():
    return ranking_generating_set()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
