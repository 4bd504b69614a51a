import pytest

from cartpend import PendulumParams, linearize
from refsys import POLES


@pytest.fixture
def params():
    return PendulumParams()


@pytest.fixture
def sys_c(params):
    return linearize(params)


@pytest.fixture
def poles():
    return POLES
