import pytest

from numerics.params import GegenbauerParams
from numerics_config import NumericsSettings
from operators.maximal_operators import create_radius_grid
from operators.test_functions import create_test_function


@pytest.fixture
def params() -> GegenbauerParams:
    return GegenbauerParams(lam=0.25)


@pytest.fixture
def edge() -> GegenbauerParams:
    """lambda = 1/2, where the weight sh t integrates in closed form"""
    return GegenbauerParams.edge()


@pytest.fixture
def grid():
    return create_radius_grid(1e-2, 10.0, 16)


@pytest.fixture
def bump():
    return create_test_function("bump:1,2")


@pytest.fixture
def settings() -> NumericsSettings:
    return NumericsSettings()
