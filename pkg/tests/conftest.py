import numpy as np
import pytest

from kinterp.grid import LogGrid


@pytest.fixture(scope="session")
def grid():
    return LogGrid(1e-12, 64)


@pytest.fixture(scope="session")
def coarse_grid():
    return LogGrid(1e-6, 32)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
