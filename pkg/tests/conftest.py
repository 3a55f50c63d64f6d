import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_simplex(rng, dim: int) -> np.ndarray:
    """Uniform draw from the probability simplex."""
    return rng.dirichlet(np.ones(dim))
