import math

import pytest

from markoff_systoles.algebra.markoff_map import MarkoffMap
from markoff_systoles.config.settings import load_config
from markoff_systoles.core.data_types import MarkoffTriple, MuParams
from markoff_systoles.verifiers.sink_verifier import SinkVerifier

# (3 + sqrt 17) / 2, dominant root of X^3 - 3X^2 - 3 - sqrt 17
N3_DOMINANT = (3 + math.sqrt(17)) / 2


@pytest.fixture
def config():
    """Small sample budget, no environment"""
    return load_config({'samples': 4_000, 'chunk_size': 1_000, 'seed': 7}, use_environment=False)


@pytest.fixture
def classic_map(config):
    """Bowditch's map: base (3, 3, 3), mu = 0"""
    return MarkoffMap(MuParams(0, 0, 0, 0), MarkoffTriple(3, 3, 3), config=config)


@pytest.fixture
def sphere_map(config):
    """(7, 7, 7) on the (8, 8, 8, -28) variety"""
    return MarkoffMap(MuParams(8, 8, 8, -28), MarkoffTriple(7, 7, 7), config=config)


@pytest.fixture
def verifier(config):
    return SinkVerifier(config)
