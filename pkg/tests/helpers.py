"""Hypothesis strategies and small builders shared by the tests."""
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from necklace_lab.core import Box, DiscreteNecklace, GridColoring

F = Fraction


def rationals(max_den=8, lo=0, hi=1):
    return st.builds(F, st.integers(lo * max_den, hi * max_den), st.just(max_den))


@st.composite
def grid_colorings(draw, d=None, k=3, max_cells=4):
    d = draw(st.integers(1, 2)) if d is None else d
    bps = []
    for _ in range(d):
        inner = draw(st.lists(st.integers(1, 15), max_size=max_cells - 1, unique=True))
        bps.append([F(0)] + sorted(F(x, 16) for x in inner) + [F(1)])
    shape = [len(b) - 1 for b in bps]
    colors = draw(st.lists(st.integers(1, k), min_size=int(np.prod(shape)), max_size=int(np.prod(shape))))
    return GridColoring(bps, np.array(colors).reshape(shape), k)


@st.composite
def discrete_necklaces(draw, d=1, max_len=10, k=3, q=2):
    if d == 1:
        sides = (q * draw(st.integers(1, max_len // q)),)
    else:
        sides = tuple(draw(st.integers(1, 3)) for _ in range(d))
        if np.prod(sides) % q:
            sides = (sides[0] * q,) + sides[1:]
    n = int(np.prod(sides))
    half = draw(st.lists(st.integers(1, k), min_size=n // q, max_size=n // q))
    perm = draw(st.permutations(list(range(n))))
    beads = np.repeat(half, q)[perm]
    return DiscreteNecklace(beads.reshape(sides), q, k)


def unit_box(d):
    return Box((0,) * d, (1,) * d)
