import numpy as np
import pytest

from oddflow.grid import Grid
from oddflow.littlewood_paley import make_cutoffs


@pytest.fixture(scope="session")
def grid32():
    return Grid(32)


@pytest.fixture(scope="session")
def grid64():
    return Grid(64)


@pytest.fixture(scope="session")
def cutoffs64(grid64):
    return make_cutoffs(grid64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
