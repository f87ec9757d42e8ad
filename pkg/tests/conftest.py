import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from markovdsep import catalog

MODELS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'markovdsep', 'models')

settings.register_profile("markovdsep", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("markovdsep")


@pytest.fixture
def models_dir():
    return MODELS_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def fork():
    return catalog.fork()


@pytest.fixture
def chain():
    return catalog.chain()


@pytest.fixture
def collider():
    return catalog.collider()


@pytest.fixture
def diamond():
    return catalog.diamond()


@pytest.fixture
def instrumental():
    return catalog.instrumental()


@pytest.fixture
def bell():
    return catalog.bell()


@pytest.fixture
def two_output():
    return catalog.two_output()


@pytest.fixture
def marginal_fork():
    return catalog.marginal_fork()


@pytest.fixture
def figure_signature():
    return catalog.figure_signature()
