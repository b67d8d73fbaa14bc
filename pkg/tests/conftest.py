import numpy as np
import pytest

from vlft_lab.engine.channel_core import channel_from_matrix, make_bsc

P_0789 = 0.0789


@pytest.fixture
def noiseless():
    return make_bsc(0.0)


@pytest.fixture
def bsc01():
    return make_bsc(0.1)


@pytest.fixture
def bsc_0789():
    return make_bsc(P_0789)


@pytest.fixture
def dmc_2x3():
    """Binary-input, ternary-output channel with every transition positive."""
    return channel_from_matrix(
        [[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]],
        [0.4, 0.6],
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
