import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def zero_diag(rng, n, norm=None):
    E = complex_gaussian(rng, (n, n))
    np.fill_diagonal(E, 0)
    if norm is not None:
        E *= norm / np.linalg.norm(E, 2)
    return E
