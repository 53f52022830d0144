import math

import pytest

from ucp.schemas.schemas import UcpSpec

# (alpha, beta) families used across the engine comparisons
SHAPES = [(1.0, 0.0), (0.0, 1.0), (0.5, 0.5), (0.5, 1.0), (0.5, 2.0)]
RHOS = [2.5, 3.0, 4.0]


@pytest.fixture
def cantor_spec():
    return UcpSpec(L=10.0, V=25.0, rho=3.0, alpha=1.0, beta=0.0, G=3)


@pytest.fixture
def saturation_spec():
    return UcpSpec(L=5.0, V=25.0, rho=2.5, alpha=0.5, beta=1.0, G=4)


@pytest.fixture
def bounded_spec():
    return UcpSpec(L=10.0, V=25.0, rho=math.e, alpha=2.0, beta=-0.1, G=19)
