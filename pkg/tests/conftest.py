import numpy as np
import pytest
from hypothesis import settings

from urequiv.states import rng_from_seed

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_hermitian(rng, dim, scale=1.0):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (g + g.conj().T) / 2


@pytest.fixture
def rng():
    return rng_from_seed(1234)
