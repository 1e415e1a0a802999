import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from necklace_lab.core import (
    AxisCut,
    Box,
    DiscreteNecklace,
    GridColoring,
    PartMeasures,
    Splitting,
    discrete_splitting,
    discrete_to_grid,
    granularity_axis,
    is_fair,
    lattice_to_grid,
    measure_vector,
    part_counts,
    part_measures,
)
from necklace_lab.errors import DomainError, InputError
from necklace_lab.labeling import restricted_growth

from helpers import discrete_necklaces, grid_colorings, unit_box


def test_measure_vector_half_split(ab_line):
    assert measure_vector(ab_line, Box((0,), (1,))) == (F(1, 2), F(1, 2))
    assert measure_vector(ab_line, Box((F(1, 4),), (F(3, 4),))) == (F(1, 4), F(1, 4))


def test_measure_vector_outside_domain(ab_line):
    with pytest.raises(DomainError):
        measure_vector(ab_line, Box((F(-1, 2),), (1,)))


def _cellwise(coloring, box):
    """Oracle: sum the exact overlap of every grid cell with the box."""
    out = [F(0)] * coloring.k
    for idx in itertools.product(*(range(s) for s in coloring.shape)):
        cell = coloring.cell_box(idx)
        vol = F(1)
        for a in range(coloring.d):
            vol *= max(F(0), min(cell.hi[a], box.hi[a]) - max(cell.lo[a], box.lo[a]))
        out[coloring.colors[idx] - 1] += vol
    return tuple(out)


def test_random_grid_full_square_sums_to_one():
    rng = np.random.default_rng(3)
    bps = [[F(0), F(1, 3), F(3, 4), F(1)], [F(0), F(1, 5), F(1)]]
    g = GridColoring(bps, rng.integers(1, 4, size=(3, 2)), 3)
    m = measure_vector(g, unit_box(2))
    assert sum(m) == 1
    assert m == _cellwise(g, unit_box(2))


@given(grid_colorings(), st.data())
def test_measure_matches_cellwise_oracle(g, data):
    lo = [data.draw(st.integers(0, 8)) for _ in range(g.d)]
    hi = [data.draw(st.integers(x, 8)) for x in lo]
    box = Box(tuple(F(x, 8) for x in lo), tuple(F(x, 8) for x in hi))
    m = measure_vector(g, box)
    assert m == _cellwise(g, box)
    assert sum(m) == box.volume


@given(grid_colorings(), st.integers(1, 15))
def test_measure_additive_under_bisection(g, cut):
    c = F(cut, 16)
    left = Box((0,) * g.d, (c,) + (1,) * (g.d - 1))
    right = Box((c,) + (0,) * (g.d - 1), (1,) * g.d)
    whole = measure_vector(g, unit_box(g.d))
    assert tuple(a + b for a, b in zip(measure_vector(g, left), measure_vector(g, right))) == whole


def test_part_measures_examples(ab_line):
    box = Box((0,), (1,))
    one = part_measures(ab_line, Splitting(box, (AxisCut(0, F(1, 2)),), (1, 2), 2))
    assert one.rows == ((F(1, 2), 0), (0, F(1, 2)))
    assert not is_fair(one)
    two = part_measures(ab_line, Splitting(box, (AxisCut(0, F(1, 4)), AxisCut(0, F(3, 4))), (1, 2, 1), 2))
    assert two.rows == ((F(1, 4), F(1, 4)), (F(1, 4), F(1, 4)))
    assert is_fair(two)


@given(grid_colorings(), st.integers(2, 3))
def test_zero_cuts_single_piece(g, q):
    pm = part_measures(g, Splitting(unit_box(g.d), (), (1,), q))
    assert pm.rows[0] == measure_vector(g, unit_box(g.d))
    assert all(x == 0 for row in pm.rows[1:] for x in row)


@given(grid_colorings(), st.lists(st.integers(1, 15), max_size=3), st.data())
def test_parts_sum_to_box_measure(g, cuts, data):
    cs = tuple(AxisCut(data.draw(st.integers(0, g.d - 1)), F(c, 16)) for c in cuts)
    lab = tuple(data.draw(st.integers(1, 3)) for _ in range(_pieces(cs, g.d)))
    pm = part_measures(g, Splitting(unit_box(g.d), cs, lab, 3))
    assert pm.totals() == measure_vector(g, unit_box(g.d))
    assert all(x >= 0 for row in pm.rows for x in row)


def _pieces(cuts, d):
    counts = [0] * d
    for c in cuts:
        counts[c.axis] += 1
    return int(np.prod([c + 1 for c in counts]))


@given(st.permutations([1, 2, 3]))
def test_is_fair_invariant_under_label_permutation(perm):
    g = GridColoring.intervals([0, F(1, 3), F(2, 3), 1], [1, 2, 1])
    cuts = tuple(AxisCut(0, F(i, 6)) for i in range(1, 6))
    lab = (1, 2, 3, 3, 2, 1)
    base = is_fair(part_measures(g, Splitting(unit_box(1), cuts, lab, 3)))
    relab = tuple(perm[x - 1] for x in lab)
    assert is_fair(part_measures(g, Splitting(unit_box(1), cuts, relab, 3))) == base


def test_is_fair_examples():
    assert is_fair(PartMeasures(((F(1, 4), F(1, 4)), (F(1, 4), F(1, 4)))))
    assert not is_fair(PartMeasures(((F(1, 2), 0), (0, F(1, 2)))))


def test_granularity_examples():
    assert granularity_axis(Splitting(unit_box(1), (AxisCut(0, F(1, 4)), AxisCut(0, F(3, 4))), (1, 2, 1), 2)) == F(1, 4)
    assert granularity_axis(Splitting(unit_box(2), (), (1,), 2)) == 1
    s = Splitting(unit_box(2), (AxisCut(0, F(1, 3)), AxisCut(1, F(1, 5))), (1, 2, 2, 1), 2)
    assert granularity_axis(s) == F(1, 5)


@given(st.lists(st.integers(1, 15), max_size=4), st.lists(st.integers(1, 15), max_size=4))
def test_granularity_bounds_every_piece_side(xs, ys):
    cuts = tuple(AxisCut(0, F(x, 16)) for x in xs) + tuple(AxisCut(1, F(y, 16)) for y in ys)
    s = Splitting(unit_box(2), cuts, (1,) * _pieces(cuts, 2), 1)
    g = granularity_axis(s)
    assert all(min(p.extents) >= g for _, _, p in s.pieces())
    assert any(min(p.extents) == g for _, _, p in s.pieces())


def test_discrete_to_grid_examples():
    g = discrete_to_grid(DiscreteNecklace.from_string("AABB", 2))
    assert g.breakpoints == ((0, 1, 2, 3, 4),)
    assert list(g.colors) == [1, 1, 2, 2]
    sq = discrete_to_grid(DiscreteNecklace(np.array([[1, 2], [2, 1]]), 2))
    assert sq.bounds == Box((0, 0), (2, 2)) and sq.shape == (2, 2)


@given(discrete_necklaces(d=2, k=3))
def test_discrete_to_grid_preserves_counts(n):
    assert measure_vector(discrete_to_grid(n), discrete_to_grid(n).bounds) == tuple(F(c) for c in n.color_counts())


@given(discrete_necklaces(d=2, k=2))
def test_discrete_and_grid_splittability_agree(n):
    """Every half-integer cut set and labeling is fair in both frames or in neither."""
    g = discrete_to_grid(n)
    cands = [(a, p) for a in range(n.d) for p in range(1, n.sides[a])]
    for t in range(min(len(cands), 2) + 1):
        for combo in itertools.combinations(cands, t):
            pos = [[p for a, p in combo if a == ax] for ax in range(n.d)]
            pieces = int(np.prod([len(p) + 1 for p in pos]))
            for lab in restricted_growth(pieces, 2):
                s = discrete_splitting(n, pos, lab)
                assert is_fair(part_counts(n, s)) == is_fair(part_measures(g, lattice_to_grid(s)))


def test_necklace_validation():
    with pytest.raises(InputError):
        DiscreteNecklace.from_string("AAB", 2)
    with pytest.raises(InputError):
        DiscreteNecklace(np.array([0, 1]), 1)
    with pytest.raises(InputError):
        GridColoring.intervals([0, 1, 1], [1, 2])
    with pytest.raises(InputError):
        Splitting(unit_box(1), (AxisCut(0, F(1, 2)),), (1,), 2)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        Box((0.5,), (1,))
