"""Discrete splitting in several dimensions.

The constructive upper bound flattens a d-dimensional necklace along the
lexicographic order of its cells, splits the resulting line exactly, and
realises each one-dimensional cut between cells ``x < y`` by a fence of
``2j - 1`` axis-parallel hyperplanes, ``j`` being the first axis where ``x``
and ``y`` differ.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import HALF, AxisCut, DiscreteNecklace, Splitting, is_fair, part_counts
from .errors import InputError
from .labeling import fair_labeling
from .splitter1d import MinCuts, solve_discrete_1d

Cell = tuple[int, ...]


@dataclass(frozen=True)
class LexLift:
    """A necklace laid out on a line in lexicographic cell order.

    ``cells[p - 1]`` is the (1-based) lattice cell at line position ``p``.
    """

    source: DiscreteNecklace
    line: DiscreteNecklace
    cells: tuple[Cell, ...]

    def position(self, cell: Sequence[int]) -> int:
        pos = 0
        for x, n in zip(cell, self.source.sides):
            if not 1 <= x <= n:
                raise InputError(f"cell {tuple(cell)} outside the necklace")
            pos = pos * n + (x - 1)
        return pos + 1

    def cell(self, position: int) -> Cell:
        return self.cells[position - 1]


def lex_lift(necklace: DiscreteNecklace) -> LexLift:
    cells = tuple(tuple(i + 1 for i in idx) for idx in itertools.product(*(range(n) for n in necklace.sides)))
    line = DiscreteNecklace(necklace.cells.ravel(), necklace.q, necklace.k, check=False)
    return LexLift(necklace, line, cells)


def lex_successor(x: Sequence[int], sides: Sequence[int]) -> Cell | None:
    y = list(x)
    for i in range(len(y) - 1, -1, -1):
        if y[i] < sides[i]:
            y[i] += 1
            return tuple(y)
        y[i] = 1
    return None


def realize_cut(x: Sequence[int], y: Sequence[int], sides: Sequence[int], j: int | None = None) -> list[AxisCut]:
    """Hyperplanes separating cells ``<= x`` from cells ``>= y`` (lex-consecutive).

    ``j`` (1-based, optional) is checked against the first differing axis.
    Returns ``z_i = x_i -+ 1/2`` for ``i < j`` and ``z_j = (x_j + y_j) / 2``.
    """
    x, y = tuple(x), tuple(y)
    if len(x) != len(sides) or len(y) != len(sides):
        raise InputError("cell dimension mismatch")
    if lex_successor(x, sides) != y:
        raise InputError(f"{y} is not the lexicographic successor of {x}")
    first = next(i for i in range(len(x)) if x[i] != y[i])
    if j is not None and j != first + 1:
        raise InputError(f"first differing axis is {first + 1}, not {j}")
    cuts = []
    for i in range(first):
        cuts.append(AxisCut(i, Fraction(x[i]) - HALF))
        cuts.append(AxisCut(i, Fraction(x[i]) + HALF))
    cuts.append(AxisCut(first, Fraction(x[first] + y[first], 2)))
    return cuts


def split_via_lift(necklace: DiscreteNecklace, q: int | None = None) -> Splitting:
    """Fair splitting with at most ``(2d - 1) k (q - 1)`` axis cuts.

    Fences of all line cuts are merged; hyperplanes on the necklace boundary
    cut nothing and are dropped. Each resulting piece lies inside one block
    of the line splitting and inherits that block's label.
    """
    q = necklace.q if q is None else q
    lift = lex_lift(necklace)
    line_split = solve_discrete_1d(lift.line, q)
    sides = necklace.sides
    positions = [int(c.coordinate - HALF) for c in line_split.cuts]  # cut after line position p
    fences: set[AxisCut] = set()
    for p in positions:
        fences.update(realize_cut(lift.cell(p), lift.cell(p + 1), sides))
    fences = {c for c in fences if HALF < c.coordinate < sides[c.axis] + HALF}

    block_label = []  # label of each line position, 1-based positions
    bounds = [0] + positions + [len(lift.cells)]
    for b, lab in enumerate(line_split.labeling):
        block_label.extend([lab] * (bounds[b + 1] - bounds[b]))

    s = Splitting(necklace.box, tuple(fences), (1,) * _num_pieces(fences, necklace.d), q)
    labels = []
    for idx, _, piece in s.pieces():
        ranges = [range(int(lo + HALF), int(hi + HALF)) for lo, hi in zip(piece.lo, piece.hi)]
        seen = {block_label[lift.position(c) - 1] for c in itertools.product(*ranges)}
        if len(seen) != 1:  # pragma: no cover - impossible by construction
            raise ArithmeticError(f"piece {idx} straddles line blocks")
        labels.append(seen.pop())
    out = Splitting(necklace.box, s.cuts, tuple(labels), q)
    if not is_fair(part_counts(necklace, out)):  # pragma: no cover - internal guard
        raise ArithmeticError("lifted splitting is not fair")
    return out


def _num_pieces(cuts, d: int) -> int:
    counts = [0] * d
    for c in cuts:
        counts[c.axis] += 1
    return math.prod(c + 1 for c in counts)


# ------------------------------------------------------- exhaustive oracle


def _piece_counts(onehot: np.ndarray, positions: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Colour counts of every piece, pieces in lexicographic order of their slab index."""
    arr = onehot
    for axis, ps in enumerate(positions):
        arr = np.add.reduceat(arr, [0, *ps], axis=axis + 1)
    k = arr.shape[0]
    return [tuple(int(v) for v in row) for row in arr.reshape(k, -1).T]


def min_cuts_cells(
    cells: np.ndarray, k: int, q: int, t_cap: int, budgets: Sequence[int] | None = None
) -> tuple[int, tuple[tuple[int, ...], ...], tuple[int, ...]] | None:
    """Exhaustive minimum over axis cut sets; ``cells`` may hold 0 for "not counted".

    Returns ``(t, positions per axis, labeling)`` for the first cut set (in
    lexicographic order of its sorted ``(axis, position)`` list) at the least
    ``t``, or None. A position ``p`` cuts between layers ``p`` and ``p + 1``.
    """
    d = cells.ndim
    sides = cells.shape
    if budgets is not None and len(budgets) != d:
        raise InputError("one budget per axis is required")
    onehot = np.stack([(cells == j).astype(np.int64) for j in range(1, k + 1)])
    totals = onehot.reshape(k, -1).sum(axis=1)
    if any(int(x) % q for x in totals):
        raise InputError(f"colour counts {totals.tolist()} not divisible by q={q}")
    candidates = [(axis, p) for axis in range(d) for p in range(1, sides[axis])]
    for t in range(min(t_cap, len(candidates)) + 1):
        for combo in itertools.combinations(candidates, t):
            positions = [[] for _ in range(d)]
            for axis, p in combo:
                positions[axis].append(p)
            if budgets is not None and any(len(ps) > b for ps, b in zip(positions, budgets)):
                continue
            labels = fair_labeling(_piece_counts(onehot, positions), q)
            if labels is not None:
                return t, tuple(tuple(ps) for ps in positions), labels
    return None


def min_cuts_discrete_md(
    necklace: DiscreteNecklace,
    q: int | None = None,
    t_cap: int | None = None,
    budgets: Sequence[int] | None = None,
) -> MinCuts:
    """Exact minimum number of axis cuts of a fair ``q``-splitting (at most ``budgets[i]`` on axis ``i``)."""
    q = necklace.q if q is None else q
    if t_cap is None:
        k_present = sum(1 for c in necklace.color_counts() if c)
        t_cap = (2 * necklace.d - 1) * k_present * (q - 1)
    if t_cap < 0:
        raise InputError("t_cap must be non-negative")
    found = min_cuts_cells(np.asarray(necklace.cells), necklace.k, q, t_cap, budgets)
    if found is None:
        return MinCuts(None, None, t_cap)
    t, positions, labels = found
    cuts = tuple(AxisCut(axis, Fraction(p) + HALF) for axis, ps in enumerate(positions) for p in ps)
    witness = Splitting(necklace.box, cuts, labels, q)
    if not is_fair(part_counts(necklace, witness)):  # pragma: no cover - internal guard
        raise ArithmeticError("oracle produced an unfair splitting")
    return MinCuts(t, witness, t_cap)


__all__ = [
    "LexLift",
    "lex_lift",
    "lex_successor",
    "min_cuts_cells",
    "min_cuts_discrete_md",
    "realize_cut",
    "split_via_lift",
]
