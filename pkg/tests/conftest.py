import numpy as np
import pytest
from hypothesis import settings

from greencell.model import Tariff, case_study, make_scenario

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture
def cs():
    return case_study()


def random_small_scenario(rng, n_bs=2, max_mt=3, tariff=None):
    """Small random instance: 2 BSs, 1..max_mt terminals, generic gains."""
    m = int(rng.integers(1, max_mt + 1))
    homes = rng.integers(0, n_bs, size=m).tolist()
    gains = rng.uniform(0.05, 1.5, size=(n_bs, m))
    if tariff is None:
        grid = rng.uniform(0.5, 2.0)
        buy = grid * rng.uniform(0.2, 0.9)
        sell = buy * rng.uniform(0.1, 0.9)
        tariff = Tariff(grid, buy, sell, rng.uniform(0, 0.3), 0.0)
    return make_scenario(harvest=rng.uniform(0.0, 3.0, size=n_bs).tolist(),
                         bandwidth=rng.uniform(1.0, 5.0, size=n_bs).tolist(),
                         homes=homes, min_rates=rng.uniform(0.5, 2.0, size=m).tolist(),
                         gains=gains, tariff=tariff)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
