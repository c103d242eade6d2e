import numpy as np
import pytest

from losmimo import ChannelSet


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run slow full-scale checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def random_channel_set(rng, cells=2, users=3, antennas=16, scale=None) -> ChannelSet:
    """Random i.i.d. complex Gaussian channel set, scaled so per-column
    norms are O(1) and SINRs land in a moderate range."""
    if scale is None:
        scale = 1.0 / np.sqrt(2 * antennas)
    shape = (cells, cells, antennas, users)
    g = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return ChannelSet(matrices=g, wavelength=0.005)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
