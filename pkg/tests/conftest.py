import numpy as np
import pytest


@pytest.fixture
def rng():
    """Fresh seeded generator per test so ordering cannot leak state."""
    return np.random.default_rng(20260817)


def random_points(rng, count, max_r=3.0):
    """Sample hyperboloid points uniformly in polar parameters."""
    from hyplune.hyperboloid import HPoint

    rs = rng.uniform(0.0, max_r, size=count)
    psis = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return [HPoint.from_polar(r, psi) for r, psi in zip(rs, psis)]
