import numpy as np
import pytest

from builders import SEED


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)
