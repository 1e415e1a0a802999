from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace_lab.core import Box, GridColoring, measure_vector
from necklace_lab.distinguish import CubePair, PairSearchBudget, audit_distinguish, find_equal_cubes, separated
from necklace_lab.errors import DomainError, InputError

from helpers import grid_colorings


def test_two_intervals_inside_one_colour(ab_line):
    a, b = Box((0,), (F(1, 5),)), Box((F(1, 4),), (F(9, 20),))
    pair = CubePair(a, b, measure_vector(ab_line, a))
    assert pair.measure == (F(1, 5), 0) and pair.verify(ab_line, F(1, 5))
    found = find_equal_cubes(ab_line, sigma=F(1, 5))
    assert found is not None and found.verify(ab_line, F(1, 5))


@settings(max_examples=40)
@given(grid_colorings(d=1, k=2))
def test_random_two_colourings_never_distinguish(c):
    pair = find_equal_cubes(c, sigma=F(1, 64))
    assert pair is not None and pair.verify(c, F(1, 64))


def test_single_colour_any_pair():
    mono = GridColoring.uniform(Box((0, 0), (1, 1)), 1, 1)
    pair = find_equal_cubes(mono, sigma=F(1, 4), budget=PairSearchBudget(starts=4))
    assert pair is not None and pair.verify(mono, F(1, 4))
    a, b = Box.cube((0, 0), F(1, 2)), Box.cube((F(1, 2), F(1, 3)), F(1, 2))
    assert measure_vector(mono, a) == measure_vector(mono, b)


def test_separation():
    a = Box.cube((0,), F(1, 2))
    assert separated(a, Box.cube((F(1, 4),), F(1, 2)), F(1, 4))
    assert not separated(a, Box.cube((F(1, 8),), F(1, 2)), F(1, 4))
    assert not separated(a, Box.cube((1,), F(1, 3)), F(1, 4))  # different sides
    assert not separated(Box.cube((0,), F(1, 8)), Box.cube((1,), F(1, 8)), F(1, 4))  # too small


@given(grid_colorings(d=1, k=3))
def test_swap_is_equivalent(c):
    pair = find_equal_cubes(c, sigma=F(1, 32))
    if pair is not None:
        assert pair.swapped().verify(c, F(1, 32))
        assert pair.swapped().swapped() == pair


def test_search_is_deterministic():
    c = GridColoring(((0, F(1, 2), 1), (0, F(1, 4), 1)), np.array([[1, 2], [2, 1]]), 2)
    budget = PairSearchBudget(starts=6, seed=3)
    assert find_equal_cubes(c, sigma=F(1, 8), budget=budget) == find_equal_cubes(c, sigma=F(1, 8), budget=budget)


def test_errors(ab_line):
    with pytest.raises(InputError):
        find_equal_cubes(ab_line)
    with pytest.raises(InputError):
        find_equal_cubes(ab_line, sigma=0)
    with pytest.raises(DomainError):
        find_equal_cubes(ab_line, window=Box((0,), (2,)), sigma=F(1, 4))
    assert find_equal_cubes(ab_line, sigma=F(1, 1)) is None


@pytest.mark.parametrize("d, k, shape, guaranteed, conjectured", [
    (1, 5, "cube", True, False),
    (2, 7, "cube", True, False),
    (2, 6, "cube", False, True),
    (2, 8, "cuboid", False, False),
    (2, 9, "cuboid", True, False),
])
def test_audit(d, k, shape, guaranteed, conjectured):
    a = audit_distinguish(d, k, shape)
    assert a.guaranteed is guaranteed and a.conjectured_impossible is conjectured
    assert a.equations == k


@given(st.integers(1, 5), st.integers(1, 25))
def test_audit_thresholds(d, k):
    assert audit_distinguish(d, k).guaranteed == (k >= 2 * d + 3)
    assert audit_distinguish(d, k, "cuboid").guaranteed == (k >= 4 * d + 1)
    assert audit_distinguish(d, k).unknowns == 2 * (d + 1)
