"""Exact domain types: necklaces, grid colourings, axis cuts, splittings.

Conventions used throughout the package:

* colours are integers ``1..k``; colour 1 is "white" in adversarial constructions;
* axes are 0-based (``axis=0`` is the first coordinate);
* a discrete necklace lives in the *lattice frame*: cell ``(x_1..x_d)`` with
  ``1 <= x_i <= n_i`` is the unit cube centred at ``x``, so the necklace box is
  ``[1/2, n_i + 1/2]`` per axis and cuts sit at half-integers;
* :func:`discrete_to_grid` uses the *grid frame* ``[x_i - 1, x_i]`` instead, a
  shift by ``-1/2`` (see :func:`lattice_to_grid`).
"""
from __future__ import annotations

import bisect
import itertools
import math
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError, InputError
from .exact import rat, rat_vector

HALF = Fraction(1, 2)


def _frozen_array(values, dtype=np.int64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Box:
    """Axis-aligned cuboid ``[lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}]``."""

    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", rat_vector(self.lo))
        object.__setattr__(self, "hi", rat_vector(self.hi))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise InputError("box corners must have the same positive dimension")
        if any(h < l for l, h in zip(self.lo, self.hi)):
            raise InputError(f"box with hi < lo: {self}")

    @classmethod
    def cube(cls, corner: Sequence, side) -> "Box":
        side = rat(side)
        if side <= 0:
            raise InputError("a necklace cube needs a positive side")
        corner = rat_vector(corner)
        return cls(corner, tuple(c + side for c in corner))

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def extents(self) -> tuple[Fraction, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    @property
    def volume(self) -> Fraction:
        return math.prod(self.extents, start=Fraction(1))

    @property
    def is_cube(self) -> bool:
        return len(set(self.extents)) == 1 and self.extents[0] > 0

    def contains(self, other: "Box") -> bool:
        return all(a <= b for a, b in zip(self.lo, other.lo)) and all(a >= b for a, b in zip(self.hi, other.hi))


@dataclass(frozen=True, eq=False)
class DiscreteNecklace:
    """A coloured integer cuboid; every colour class has size divisible by ``q``."""

    cells: np.ndarray
    q: int
    k: int

    def __init__(self, cells, q: int, k: int | None = None, check: bool = True):
        arr = _frozen_array(cells)
        if arr.ndim == 0 or arr.size == 0:
            raise InputError("a necklace needs at least one cell")
        if k is None:
            k = int(arr.max())
        if arr.min() < 1 or arr.max() > k:
            raise InputError(f"colours must lie in 1..{k}")
        if q < 1:
            raise InputError("q must be positive")
        object.__setattr__(self, "cells", arr)
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "k", int(k))
        if check:
            bad = [j for j, c in enumerate(self.color_counts(), start=1) if c % q]
            if bad:
                raise InputError(f"colour classes {bad} have size not divisible by q={q}")

    @classmethod
    def from_string(cls, beads: str, q: int, k: int | None = None) -> "DiscreteNecklace":
        """``"AABB"`` -> colours 1,1,2,2 (letters map A=1, B=2, ...)."""
        letters = string.ascii_uppercase
        return cls([letters.index(ch) + 1 for ch in beads.upper()], q, k)

    @property
    def d(self) -> int:
        return self.cells.ndim

    @property
    def sides(self) -> tuple[int, ...]:
        return tuple(int(s) for s in self.cells.shape)

    def color_counts(self) -> tuple[int, ...]:
        counts = np.bincount(self.cells.ravel(), minlength=self.k + 1)
        return tuple(int(c) for c in counts[1:])

    @property
    def box(self) -> Box:
        return Box(tuple(HALF for _ in self.sides), tuple(n + HALF for n in self.sides))

    def to_string(self) -> str:
        if self.d != 1:
            raise InputError("string form only exists for d=1")
        return "".join(string.ascii_uppercase[c - 1] for c in self.cells)

    def __eq__(self, other):
        if not isinstance(other, DiscreteNecklace):
            return NotImplemented
        return self.q == other.q and self.k == other.k and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.q, self.k, self.cells.shape, self.cells.tobytes()))


@dataclass(frozen=True, eq=False)
class GridColoring:
    """Piecewise-constant colouring of a box, constant on each half-open grid cell."""

    breakpoints: tuple[tuple[Fraction, ...], ...]
    colors: np.ndarray
    k: int

    def __init__(self, breakpoints, colors, k: int | None = None):
        bps = tuple(rat_vector(axis) for axis in breakpoints)
        arr = _frozen_array(colors)
        if arr.ndim != len(bps):
            raise InputError("colour array rank must equal the number of axes")
        for i, axis in enumerate(bps):
            if len(axis) < 2 or any(b <= a for a, b in zip(axis, axis[1:])):
                raise InputError(f"breakpoints on axis {i} must be strictly increasing (>= 2 of them)")
            if arr.shape[i] != len(axis) - 1:
                raise InputError(f"axis {i}: {len(axis) - 1} cells but colour array has {arr.shape[i]}")
        if k is None:
            k = int(arr.max())
        if arr.min() < 1 or arr.max() > k:
            raise InputError(f"colours must lie in 1..{k}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "colors", arr)
        object.__setattr__(self, "k", int(k))

    @classmethod
    def uniform(cls, box: Box, color: int = 1, k: int | None = None) -> "GridColoring":
        shape = (1,) * box.d
        return cls(tuple((l, h) for l, h in zip(box.lo, box.hi)), np.full(shape, color), k or color)

    @classmethod
    def intervals(cls, breakpoints: Sequence, colors: Sequence[int], k: int | None = None) -> "GridColoring":
        """One-dimensional shorthand."""
        return cls((tuple(breakpoints),), list(colors), k)

    @property
    def d(self) -> int:
        return len(self.breakpoints)

    @property
    def bounds(self) -> Box:
        return Box(tuple(a[0] for a in self.breakpoints), tuple(a[-1] for a in self.breakpoints))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(s) for s in self.colors.shape)

    def cell_box(self, idx: Sequence[int]) -> Box:
        return Box(
            tuple(self.breakpoints[i][g] for i, g in enumerate(idx)),
            tuple(self.breakpoints[i][g + 1] for i, g in enumerate(idx)),
        )

    def overlaps(self, axis: int, lo: Fraction, hi: Fraction) -> list[tuple[int, Fraction]]:
        """Cells on ``axis`` meeting ``[lo, hi]`` in positive length, with that length."""
        bp = self.breakpoints[axis]
        start = max(bisect.bisect_right(bp, lo) - 1, 0)
        out = []
        for g in range(start, len(bp) - 1):
            if bp[g] >= hi:
                break
            length = min(hi, bp[g + 1]) - max(lo, bp[g])
            if length > 0:
                out.append((g, length))
        return out

    def __eq__(self, other):
        if not isinstance(other, GridColoring):
            return NotImplemented
        return (
            self.k == other.k
            and self.breakpoints == other.breakpoints
            and np.array_equal(self.colors, other.colors)
        )

    def __hash__(self):
        return hash((self.k, self.breakpoints, self.colors.tobytes()))


@dataclass(frozen=True, order=True)
class AxisCut:
    axis: int
    coordinate: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coordinate", rat(self.coordinate))
        if self.axis < 0:
            raise InputError("axis must be non-negative")


@dataclass(frozen=True)
class Splitting:
    """Axis-aligned cuts of ``box`` plus a part label (``1..q``) per piece.

    Pieces are indexed by their per-axis slab index and ``labeling`` lists
    their labels in lexicographic order of that index.
    """

    box: Box
    cuts: tuple[AxisCut, ...]
    labeling: tuple[int, ...]
    q: int

    def __post_init__(self):
        cuts = tuple(sorted(self.cuts))
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "labeling", tuple(int(x) for x in self.labeling))
        if any(c.axis >= self.box.d for c in cuts):
            raise InputError("cut axis out of range")
        if len(self.labeling) != self.num_pieces:
            raise InputError(f"labeling has {len(self.labeling)} entries for {self.num_pieces} pieces")
        if any(not 1 <= x <= self.q for x in self.labeling):
            raise InputError(f"labels must lie in 1..{self.q}")

    @property
    def t(self) -> int:
        return len(self.cuts)

    def cuts_on(self, axis: int) -> tuple[Fraction, ...]:
        return tuple(c.coordinate for c in self.cuts if c.axis == axis)

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.cuts_on(i)) for i in range(self.box.d))

    def slab_bounds(self, axis: int) -> tuple[Fraction, ...]:
        return (self.box.lo[axis],) + self.cuts_on(axis) + (self.box.hi[axis],)

    @property
    def num_pieces(self) -> int:
        return math.prod(t + 1 for t in self.counts())

    def piece_indices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(t + 1) for t in self.counts()))

    def pieces(self) -> Iterator[tuple[tuple[int, ...], int, Box]]:
        bounds = [self.slab_bounds(i) for i in range(self.box.d)]
        for idx, label in zip(self.piece_indices(), self.labeling):
            lo = tuple(bounds[i][s] for i, s in enumerate(idx))
            hi = tuple(bounds[i][s + 1] for i, s in enumerate(idx))
            yield idx, label, Box(lo, hi)


@dataclass(frozen=True)
class PartMeasures:
    """``rows[l][j]``: amount of colour ``j+1`` captured by part ``l+1``."""

    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def q(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def totals(self) -> tuple[Fraction, ...]:
        return tuple(sum((r[j] for r in self.rows), Fraction(0)) for j in range(self.k))


def measure_vector(coloring: GridColoring, box: Box) -> tuple[Fraction, ...]:
    """Exact measure of each colour inside ``box``."""
    if box.d != coloring.d:
        raise DomainError("box dimension differs from colouring dimension")
    if not coloring.bounds.contains(box):
        raise DomainError(f"box {box} is not inside the colouring domain {coloring.bounds}")
    out = [Fraction(0)] * coloring.k
    per_axis = [coloring.overlaps(i, box.lo[i], box.hi[i]) for i in range(box.d)]
    colors = coloring.colors
    for combo in itertools.product(*per_axis):
        idx = tuple(g for g, _ in combo)
        vol = Fraction(1)
        for _, length in combo:
            vol *= length
        out[colors[idx] - 1] += vol
    return tuple(out)


def part_measures(coloring: GridColoring, splitting: Splitting) -> PartMeasures:
    if not coloring.bounds.contains(splitting.box):
        raise DomainError("splitting box is not inside the colouring domain")
    rows = [[Fraction(0)] * coloring.k for _ in range(splitting.q)]
    for _, label, piece in splitting.pieces():
        if piece.volume == 0:
            continue
        for j, m in enumerate(measure_vector(coloring, piece)):
            rows[label - 1][j] += m
    return PartMeasures(tuple(tuple(r) for r in rows))


def part_counts(necklace: DiscreteNecklace, splitting: Splitting) -> PartMeasures:
    """Colour counts per part for a lattice-frame splitting of a discrete necklace."""
    if splitting.box != necklace.box:
        raise DomainError("splitting box must be the necklace box (lattice frame)")
    for c in splitting.cuts:
        if (c.coordinate - HALF).denominator != 1:
            raise DomainError(f"discrete cuts must sit at half-integers, got {c.coordinate}")
    rows = [[0] * necklace.k for _ in range(splitting.q)]
    bounds = [
        [int(b + HALF) for b in splitting.slab_bounds(i)] for i in range(necklace.d)
    ]  # slab s covers 0-based cells bounds[s]-1 .. bounds[s+1]-2
    for idx, label in zip(splitting.piece_indices(), splitting.labeling):
        sl = tuple(slice(bounds[i][s] - 1, bounds[i][s + 1] - 1) for i, s in enumerate(idx))
        block = necklace.cells[sl]
        if block.size:
            counts = np.bincount(block.ravel(), minlength=necklace.k + 1)
            for j in range(necklace.k):
                rows[label - 1][j] += int(counts[j + 1])
    return PartMeasures(tuple(tuple(Fraction(x) for x in r) for r in rows))


def is_fair(pm: PartMeasures) -> bool:
    totals = pm.totals()
    q = pm.q
    return all(row[j] * q == totals[j] for row in pm.rows for j in range(pm.k))


def granularity_axis(splitting: Splitting) -> Fraction:
    """Shortest gap between consecutive cut coordinates (box faces included)."""
    gaps = []
    for i in range(splitting.box.d):
        b = splitting.slab_bounds(i)
        gaps.extend(y - x for x, y in zip(b, b[1:]))
    return min(gaps)


def discrete_to_grid(necklace: DiscreteNecklace) -> GridColoring:
    """Unit-cell embedding: lattice cell ``x`` becomes ``[x_i - 1, x_i]``."""
    bps = tuple(tuple(Fraction(v) for v in range(n + 1)) for n in necklace.sides)
    return GridColoring(bps, necklace.cells, necklace.k)


def lattice_to_grid(splitting: Splitting) -> Splitting:
    """Shift a lattice-frame splitting into the frame of :func:`discrete_to_grid`."""
    box = Box(tuple(x - HALF for x in splitting.box.lo), tuple(x - HALF for x in splitting.box.hi))
    cuts = tuple(AxisCut(c.axis, c.coordinate - HALF) for c in splitting.cuts)
    return Splitting(box, cuts, splitting.labeling, splitting.q)


def discrete_splitting(
    necklace: DiscreteNecklace, positions: Sequence[Sequence[int]], labeling: Sequence[int], q: int | None = None
) -> Splitting:
    """Build a lattice-frame splitting from cut positions.

    ``positions[i]`` lists integers ``p`` meaning "cut between layers ``p`` and
    ``p+1`` of axis ``i``" (``1 <= p < n_i``).
    """
    cuts = []
    for axis, ps in enumerate(positions):
        for p in ps:
            if not 1 <= p < necklace.sides[axis]:
                raise InputError(f"cut position {p} outside 1..{necklace.sides[axis] - 1} on axis {axis}")
            cuts.append(AxisCut(axis, Fraction(p) + HALF))
    return Splitting(necklace.box, tuple(cuts), tuple(labeling), q or necklace.q)
