import numpy as np
import pytest

from xsec import make_subspace


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def diagonal_line():
    """H = span{(1,1)} in R^2."""
    return make_subspace(2, "H", [[1.0, 1.0]])


@pytest.fixture
def hexagon_plane():
    """H = {x1 + x2 + x3 = 0} in R^3."""
    return make_subspace(3, "complement", [[1.0, 1.0, 1.0]])


def random_psd(rng, k, rank=None):
    B = rng.normal(size=(k, rank or k))
    return B @ B.T


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
