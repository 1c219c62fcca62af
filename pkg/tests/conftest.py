import numpy as np
import pytest

from qosc import DeformationContext


@pytest.fixture
def ctx():
    return DeformationContext(q=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
