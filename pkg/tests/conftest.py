import numpy as np
import pytest

from models.models import Eos

GAMMAS = (4.0 / 3.0, 5.0 / 3.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def eos():
    return Eos(gamma=5.0 / 3.0)


@pytest.fixture(params=GAMMAS, ids=["4/3", "5/3", "2"])
def any_eos(request):
    return Eos(gamma=request.param)
