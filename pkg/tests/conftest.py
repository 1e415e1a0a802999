from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from necklace_lab.core import GridColoring

settings.register_profile(
    "lab", deadline=None, derandomize=True, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("lab")

F = Fraction


@pytest.fixture
def ab_line():
    """A on [0, 1/2), B on [1/2, 1]."""
    return GridColoring.intervals([0, F(1, 2), 1], [1, 2])
