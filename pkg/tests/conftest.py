import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def sample_exterior_points(gmap, count, seed):
    """Seeded points in the exterior of the model's domain."""
    gen = np.random.default_rng(seed)
    r_lo = gmap.domain.circumscribed_radius() * 1.05 + 0.5
    radii = np.exp(gen.uniform(np.log(r_lo), np.log(r_lo + 20.0), size=count))
    dirs = gen.normal(size=(count, gmap.n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return radii[:, None] * dirs
