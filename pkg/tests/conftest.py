import numpy as np
import pytest

from trustspectra import fixtures as fx
from trustspectra import svd
from trustspectra.linalg import warm_up


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    warm_up()


@pytest.fixture(scope="session")
def table1():
    return fx.load_table1()


@pytest.fixture(scope="session")
def example_block():
    return fx.worked_example_block()


@pytest.fixture(scope="session")
def example_decomp(example_block):
    return svd(example_block, tol=fx.WORKED_EXAMPLE_TOL)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
