import numpy as np
import pytest

from sixdma.channel import RadioParams
from sixdma.config import ScenarioConfig
from sixdma.geometry import GeometryParams, build_config_space
from sixdma.profiler import GridSpec, build_library
from sixdma.transitions import PositionGraph


@pytest.fixture(scope="session")
def space():
    return build_config_space(GeometryParams())


@pytest.fixture(scope="session")
def graph(space):
    return PositionGraph.from_config_space(space)


@pytest.fixture(scope="session")
def radio():
    return RadioParams()


@pytest.fixture(scope="session")
def grid():
    return GridSpec()


@pytest.fixture(scope="session")
def bs_center():
    return np.array([150.0, 150.0, 10.0])


@pytest.fixture(scope="session")
def config():
    return ScenarioConfig()


@pytest.fixture(scope="session")
def library(space, grid, radio, bs_center, config):
    return build_library(space, grid, radio, config.profiler, bs_center, seed=0)
