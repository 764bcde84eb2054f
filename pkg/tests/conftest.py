import numpy as np
import pytest

from dissiflow.dissipation import GasPipe
from dissiflow.models import BoundaryData, Network
from dissiflow.robust import AffineCost, CostModel, OperatingPoint, ScenarioBox


def path_network(bounds=None, c=1.0):
    """Series path 1-2-3 with S={1}, R={2}, T={3}."""
    bounds = bounds or {node: (0.0, 4.0) for node in (1, 2, 3)}
    return Network.build({1: 'S', 2: 'R', 3: 'T'},
                         [(1, 2, GasPipe(c)), (2, 3, GasPipe(c))], bounds)


def triangle_network(b=0.0):
    """Triangle with S={1}, R={2}, T={3}; the (1, 3) pipe optionally compresses."""
    compressed = GasPipe(0.5, b=b, b_min=0.0, b_max=1.0)
    return Network.build({1: 'S', 2: 'R', 3: 'T'},
                         [(1, 2, GasPipe(1.0)), (2, 3, GasPipe(2.0)), (1, 3, compressed)],
                         {node: (0.0, 10.0) for node in (1, 2, 3)})


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def two_node():
    return Network.build({1: 'S', 2: 'T'}, [(1, 2, GasPipe(1.0))])


@pytest.fixture
def three_node():
    return path_network()


@pytest.fixture
def triangle():
    return triangle_network()


@pytest.fixture
def corner_box():
    return ScenarioBox(lower={2: -0.5}, upper={2: 0.0})


@pytest.fixture
def operating_point():
    return OperatingPoint(q_S={1: 1.0}, pi_T={3: 1.0})


@pytest.fixture
def cost():
    return CostModel(source_costs={1: AffineCost(1.0)}, terminal_revenues={3: AffineCost(2.0)})


@pytest.fixture
def upper_boundary():
    return BoundaryData(q_R={2: 0.0}, q_S={1: 1.0}, pi_T={3: 1.0})
