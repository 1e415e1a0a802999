import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from necklace_lab.core import AxisCut, DiscreteNecklace, Splitting, is_fair, part_counts
from necklace_lab.discrete_bounds import min_cuts_subset
from necklace_lab.errors import InputError
from necklace_lab.multidim import (
    lex_lift,
    lex_successor,
    min_cuts_discrete_md,
    realize_cut,
    split_via_lift,
)
from necklace_lab.splitter1d import min_cuts_discrete_1d, solve_discrete_1d

from helpers import discrete_necklaces

BY_SECOND = DiscreteNecklace(np.array([[1, 2], [1, 2]]), 2)  # colour = second coordinate


def test_lift_examples():
    assert lex_lift(BY_SECOND).line.to_string() == "ABAB"
    line = DiscreteNecklace.from_string("AABB", 2)
    assert lex_lift(line).line == line
    mono = lex_lift(DiscreteNecklace(np.ones((3, 3), dtype=int), 3))
    assert mono.line.to_string() == "A" * 9


@given(discrete_necklaces(d=3, k=3))
def test_lift_is_order_preserving_bijection(n):
    lift = lex_lift(n)
    assert list(lift.cells) == sorted(lift.cells)
    assert all(lift.position(c) == p for p, c in enumerate(lift.cells, start=1))
    assert lift.line.color_counts() == n.color_counts()
    assert all(n.cells[tuple(x - 1 for x in c)] == lift.line.cells[p - 1] for p, c in enumerate(lift.cells, 1))


def test_realize_examples():
    assert realize_cut((1, 2), (2, 1), (2, 2), j=1) == [AxisCut(0, F(3, 2))]
    assert realize_cut((1, 3), (1, 4), (2, 4), j=2) == [AxisCut(0, F(1, 2)), AxisCut(0, F(3, 2)), AxisCut(1, F(7, 2))]
    assert realize_cut((3,), (4,), (5,)) == [AxisCut(0, F(7, 2))]


def test_realize_rejects_non_consecutive():
    with pytest.raises(InputError):
        realize_cut((1, 1), (1, 3), (2, 3))
    with pytest.raises(InputError):
        realize_cut((1, 3), (1, 4), (2, 4), j=1)


@pytest.mark.parametrize("sides", [(2, 3), (3, 2, 2), (2, 2, 2, 2)])
def test_realized_fence_separates_prefix(sides):
    cells = list(itertools.product(*(range(1, n + 1) for n in sides)))
    for x in cells[:-1]:
        y = lex_successor(x, sides)
        fence = realize_cut(x, y, sides)
        j = next(i for i in range(len(x)) if x[i] != y[i]) + 1
        assert len(fence) == 2 * j - 1

        def key(c):
            return tuple(sum(1 for f in fence if f.axis == a and c[a] > f.coordinate) for a in range(len(sides)))

        before = {key(c) for c in cells if c <= x}
        after = {key(c) for c in cells if c > x}
        assert not before & after


def test_split_via_lift_examples():
    s = split_via_lift(BY_SECOND)
    assert is_fair(part_counts(BY_SECOND, s)) and s.t <= 3
    mono = DiscreteNecklace(np.ones((4, 4), dtype=int), 2)
    assert split_via_lift(mono).t <= 3
    line = DiscreteNecklace.from_string("ABBAABBA", 2)
    assert split_via_lift(line) == solve_discrete_1d(line)


@given(st.integers(2, 3).flatmap(lambda d: discrete_necklaces(d=d, k=3)))
def test_lift_sandwich(n):
    s = split_via_lift(n)
    assert is_fair(part_counts(n, s))
    assert s.t <= (2 * n.d - 1) * n.k * (n.q - 1)
    m = min_cuts_discrete_md(n, t_cap=s.t)
    assert m.found and m.t_min <= s.t


def test_min_cuts_md_by_second_coordinate():
    m = min_cuts_discrete_md(BY_SECOND)
    assert m.t_min == 1 and is_fair(part_counts(BY_SECOND, m.witness))
    # the fair single cut separates the two rows; cutting between the colours is not fair
    assert m.witness.cuts == (AxisCut(0, F(3, 2)),)
    colour_cut = Splitting(BY_SECOND.box, (AxisCut(1, F(3, 2)),), (1, 2), 2)
    assert not is_fair(part_counts(BY_SECOND, colour_cut))


@given(discrete_necklaces(d=1, max_len=10, k=3))
def test_md_oracle_matches_1d(n):
    assert min_cuts_discrete_md(n).t_min == min_cuts_discrete_1d(n).t_min


def test_hard_single_colour_instance():
    cells = np.array([[2, 2, 2], [1, 2, 1], [1, 1, 1]])
    assert min_cuts_subset(cells == 2, 2) >= 2


def test_per_axis_budgets():
    n = DiscreteNecklace(np.array([[1, 1], [2, 2]]), 2)  # colour = first coordinate
    assert min_cuts_discrete_md(n).t_min == 1
    m = min_cuts_discrete_md(n, budgets=(1, 0))  # only a first-axis cut allowed
    assert m.t_min is None  # a single first-axis cut separates the colours
    m2 = min_cuts_discrete_md(n, budgets=(0, 1))
    assert m2.t_min == 1 and all(c.axis == 1 for c in m2.witness.cuts)
