import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from necklace_lab.core import AxisCut, Box, GridColoring, Splitting, measure_vector, part_measures
from necklace_lab.errors import BoundednessError, DomainError
from necklace_lab.polytope import (
    ArbitrarySplitting,
    Hyperplane,
    Polytope,
    arrangement_cells,
    box_halfspaces,
    box_polytope_color_measures,
    inscribed_cube_side,
    polytope_volume,
    vertex_enumeration,
    verify_arbitrary_splitting,
)

from helpers import grid_colorings, unit_box

HALF_DIAG = ((F(1), F(1)), F(1))  # x + y <= 1


def simplex(d):
    hs = [(tuple(F(-int(i == j)) for j in range(d)), F(0)) for i in range(d)]
    return Polytope.from_halfspaces(hs + [((F(1),) * d, F(1))], d)


def test_vertex_examples():
    assert len(vertex_enumeration(box_halfspaces(unit_box(2)))) == 4
    V = vertex_enumeration(box_halfspaces(unit_box(2)) + [HALF_DIAG])
    assert sorted(V) == [(0, 0), (0, 1), (1, 0)]
    assert vertex_enumeration(box_halfspaces(unit_box(2)) + [((F(1), F(1)), F(-1))]) == []


def test_unbounded_rejected():
    with pytest.raises(BoundednessError):
        vertex_enumeration([((F(-1), F(0)), F(0))], 2)


@st.composite
def hyperplanes(draw, d):
    normal = [F(draw(st.integers(-3, 3)), draw(st.integers(1, 3))) for _ in range(d)]
    if not any(normal):
        normal[0] = F(1)
    point = [F(draw(st.integers(1, 7)), 8) for _ in range(d)]
    return Hyperplane(tuple(normal), sum(a * b for a, b in zip(normal, point)))


@given(st.data())
def test_vertices_satisfy_constraints(data):
    hs = box_halfspaces(unit_box(3)) + [data.draw(hyperplanes(3)).halfspace(-1) for _ in range(3)]
    for v in vertex_enumeration(hs, 3):
        assert all(sum(a * x for a, x in zip(n, v)) <= b for n, b in hs)
        assert sum(1 for n, b in hs if sum(a * x for a, x in zip(n, v)) == b) >= 3


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_simplex_volume(d):
    assert polytope_volume(simplex(d)) == F(1, math.factorial(d))


def test_triangle_volume_and_degenerate():
    assert polytope_volume(Polytope.from_box(unit_box(2)).intersect([HALF_DIAG])) == F(1, 2)
    flat = Polytope.from_box(unit_box(2)).intersect([((F(1), F(0)), F(0))])
    assert polytope_volume(flat) == 0


@given(st.data())
def test_hyperplane_halves_sum_to_one_and_match_qhull(data):
    h = data.draw(hyperplanes(3))
    cube = Polytope.from_box(unit_box(3))
    parts = [cube.intersect([h.halfspace(s)]) for s in (-1, 1)]
    vols = [polytope_volume(p) for p in parts]
    assert sum(vols) == 1
    for p, v in zip(parts, vols):
        if v > 0:
            hull = ConvexHull(np.array(p.vertices, dtype=float))
            assert float(v) == pytest.approx(hull.volume, abs=1e-9)


@given(st.data(), st.permutations(list(range(6))))
def test_volume_invariant_under_order_and_redundancy(data, perm):
    h = data.draw(hyperplanes(3))
    hs = box_halfspaces(unit_box(3)) + [h.halfspace(-1)]
    p1 = Polytope.from_halfspaces(hs, 3)
    shuffled = [hs[i] for i in perm] + hs[6:] + [((F(1), F(0), F(0)), F(2))]
    assert polytope_volume(Polytope.from_halfspaces(shuffled, 3)) == polytope_volume(p1)


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_arrangement_cells_partition_box(d, t, data):
    hyps = [data.draw(hyperplanes(d)) for _ in range(t)]
    cells = arrangement_cells(unit_box(d), hyps)
    assert sum(polytope_volume(c) for _, c in cells) == 1
    assert len({s for s, _ in cells}) == len(cells)


def test_color_measures_examples():
    checker = GridColoring(((0, F(1, 2), 1), (0, F(1, 2), 1)), np.array([[1, 2], [2, 1]]), 2)
    tri = Polytope.from_box(unit_box(2)).intersect([HALF_DIAG])
    # below the anti-diagonal: the whole (0,0) cell, half of each off-diagonal cell
    assert box_polytope_color_measures(checker, tri) == (F(1, 4), F(1, 4))
    assert box_polytope_color_measures(checker, Polytope.from_box(unit_box(2))) == measure_vector(checker, unit_box(2))
    mono = GridColoring.uniform(unit_box(2), 1, 2)
    assert box_polytope_color_measures(mono, tri) == (F(1, 2), 0)


@given(grid_colorings(d=2), st.data())
def test_color_measures_sum_to_volume(g, data):
    p = Polytope.from_box(unit_box(2)).intersect([data.draw(hyperplanes(2)).halfspace(-1)])
    assert sum(box_polytope_color_measures(g, p)) == polytope_volume(p)


def test_inscribed_cube_examples():
    for d in (1, 2, 3):
        assert inscribed_cube_side(Polytope.from_box(unit_box(d))) == 1
    assert inscribed_cube_side(Polytope.from_box(unit_box(2)).intersect([HALF_DIAG])) == F(1, 2)
    assert inscribed_cube_side(Polytope.from_box(unit_box(2)).intersect([((F(1), F(0)), F(1, 3))])) == F(1, 3)
    with pytest.raises(DomainError):
        inscribed_cube_side(Polytope.from_box(unit_box(2)).intersect([((F(1), F(1)), F(-1))]))


def _brute_inscribed(p, den=24):
    """Oracle: largest grid cube (corner and side on a 1/den grid) inside p."""
    best = F(0)
    for s in range(1, den + 1):
        side = F(s, den)
        for corner in itertools.product(range(den + 1 - s), repeat=p.d):
            c = [F(x, den) for x in corner]
            pts = itertools.product(*[(x, x + side) for x in c])
            if all(p.contains_point(v) for v in pts):
                best = side
                break
    return best


@given(st.data())
def test_inscribed_cube_vs_grid_oracle(data):
    p = Polytope.from_box(unit_box(2)).intersect([data.draw(hyperplanes(2)).halfspace(-1)])
    if p.is_empty or polytope_volume(p) == 0:
        return
    g = inscribed_cube_side(p)
    bb = p.bounding_box()
    assert g <= min(bb.extents)
    assert _brute_inscribed(p) <= g


def test_diagonal_split_is_fair():
    mono = GridColoring.uniform(unit_box(2))
    s = ArbitrarySplitting(unit_box(2), (Hyperplane((1, 1), 1),), {(-1,): 1, (1,): 2}, 2)
    v = verify_arbitrary_splitting(mono, s)
    assert v.fair and v.granularity == F(1, 2)
    assert v.part_measures.rows == ((F(1, 2),), (F(1, 2),))


def test_zero_hyperplanes_never_fair():
    g = GridColoring.uniform(unit_box(2))
    assert not verify_arbitrary_splitting(g, ArbitrarySplitting(unit_box(2), (), {(): 1}, 2)).fair


@given(grid_colorings(d=2), st.lists(st.tuples(st.integers(0, 1), st.integers(1, 7)), max_size=3, unique=True),
       st.data())
def test_axis_hyperplanes_agree_with_core(g, cuts, data):
    cs = tuple(AxisCut(a, F(c, 8)) for a, c in cuts)
    s = Splitting(unit_box(2), cs, (1,) * _npieces(cs), 1)
    lab = tuple(data.draw(st.integers(1, 2)) for _ in range(s.num_pieces))
    s = Splitting(unit_box(2), cs, lab, 2)
    hyps = tuple(Hyperplane.axis_aligned(c.axis, c.coordinate, 2) for c in s.cuts)
    labels = {}
    for idx, label, piece in s.pieces():
        centre = [(lo + hi) / 2 for lo, hi in zip(piece.lo, piece.hi)]
        labels[tuple(h.side(centre) for h in hyps)] = label
    v = verify_arbitrary_splitting(g, ArbitrarySplitting(unit_box(2), hyps, labels, 2))
    assert v.part_measures == part_measures(g, s)


def _npieces(cuts):
    return (1 + sum(c.axis == 0 for c in cuts)) * (1 + sum(c.axis == 1 for c in cuts))


def test_hyperplane_normalisation():
    h = Hyperplane((2, 4), 6)
    assert h.normal == (1, 2) and h.offset == 3
    assert Hyperplane((0, -2), 1).normal == (0, 1)
