import numpy as np
import pytest

from projcurv.polynomial import fermat, parse_text, random_polynomial


@pytest.fixture
def line():
    return parse_text("z1", 3)


@pytest.fixture
def conic():
    return fermat(2)


@pytest.fixture
def cubic():
    return fermat(3)


@pytest.fixture
def random_quartic():
    return random_polynomial(4, 3, 5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
