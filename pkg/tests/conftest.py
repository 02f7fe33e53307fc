import numpy as np
import pytest


def random_symmetric(rng, p, scale=1.0):
    a = rng.standard_normal((p, p)) * scale
    return (a + a.T) / 2.0


def covariance_like(rng, p, noise=0.6):
    """Unit-diagonal symmetric matrix with off-diagonal noise; indefinite
    for moderate noise levels, like a thresholdable sample correlation."""
    s = random_symmetric(rng, p, scale=noise)
    np.fill_diagonal(s, 1.0)
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
