"""Fair splitting of coloured cubes: exact solvers, adversarial colourings and certificates."""
from .core import (
    AxisCut,
    Box,
    DiscreteNecklace,
    GridColoring,
    PartMeasures,
    Splitting,
    discrete_to_grid,
    granularity_axis,
    is_fair,
    measure_vector,
    part_counts,
    part_measures,
)
from .errors import BoundednessError, DomainError, InputError, NecklaceError, PatternError

__version__ = "0.1.0"

__all__ = [
    "AxisCut",
    "BoundednessError",
    "Box",
    "DiscreteNecklace",
    "DomainError",
    "GridColoring",
    "InputError",
    "NecklaceError",
    "PartMeasures",
    "PatternError",
    "Splitting",
    "discrete_to_grid",
    "granularity_axis",
    "is_fair",
    "measure_vector",
    "part_counts",
    "part_measures",
]
