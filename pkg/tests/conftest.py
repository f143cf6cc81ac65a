import numpy as np
import pytest

from swipefusion.layout import default_layout, mobile_layout
from swipefusion.spell import EditCostModel
from swipefusion.vocab import default_vocab


@pytest.fixture(scope="session")
def layout():
    return default_layout()


@pytest.fixture(scope="session")
def mobile():
    return mobile_layout()


@pytest.fixture(scope="session")
def vocab():
    return default_vocab()


@pytest.fixture(scope="session")
def costs(layout):
    return EditCostModel.for_layout(layout)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
