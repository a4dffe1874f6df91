import numpy as np
import pytest

from swanson_ep.models.swanson import ModelParams, build_matrix


@pytest.fixture
def minus_ep_params():
    # delta_- branch at epsilon = -rho
    return ModelParams(omega=2.0, gamma=1.0, rho=0.5, epsilon=-0.5, delta=1.0, eta=0.5)


@pytest.fixture
def plus_ep_params():
    # delta_+ branch at epsilon = rho
    return ModelParams(omega=2.0, gamma=1.0, rho=0.5, epsilon=0.5, delta=1.0, eta=-0.5)


@pytest.fixture
def minus_ep_matrix(minus_ep_params):
    return build_matrix(minus_ep_params)


@pytest.fixture
def plus_ep_matrix(plus_ep_params):
    return build_matrix(plus_ep_params)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
