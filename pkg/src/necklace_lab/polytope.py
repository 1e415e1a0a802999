"""Exact polytope geometry for splittings by arbitrary hyperplanes.

Polytopes are intersections of halfspaces ``a.x <= b`` with rational data.
Volumes come from a pulling triangulation (cone every facet not containing
a fixed apex vertex, recursively), so each simplex volume is a determinant
over ``d!`` and everything stays in ``Fraction``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .core import Box, GridColoring, PartMeasures, is_fair
from .errors import BoundednessError, DomainError, InputError
from .exact import affine_dimension, det, dot, rat, rat_vector, solve_square
from .lp import SystemBuilder, solve_lp

Halfspace = tuple[tuple[Fraction, ...], Fraction]


@dataclass(frozen=True)
class Hyperplane:
    """``{x : normal.x = offset}``, scaled so the first nonzero normal entry is 1."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        normal = rat_vector(self.normal)
        offset = rat(self.offset)
        lead = next((a for a in normal if a != 0), None)
        if lead is None:
            raise InputError("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", tuple(a / lead for a in normal))
        object.__setattr__(self, "offset", offset / lead)

    @classmethod
    def axis_aligned(cls, axis: int, coordinate, d: int) -> "Hyperplane":
        return cls(tuple(Fraction(int(i == axis)) for i in range(d)), coordinate)

    @property
    def d(self) -> int:
        return len(self.normal)

    def side(self, x: Sequence[Fraction]) -> int:
        v = dot(self.normal, x) - self.offset
        return (v > 0) - (v < 0)

    def halfspace(self, sign: int) -> Halfspace:
        """``sign=-1``: ``normal.x <= offset``; ``sign=+1``: ``normal.x >= offset``."""
        if sign < 0:
            return self.normal, self.offset
        return tuple(-a for a in self.normal), -self.offset


def box_halfspaces(box: Box) -> list[Halfspace]:
    out = []
    for i in range(box.d):
        e = tuple(Fraction(int(j == i)) for j in range(box.d))
        out.append((tuple(-x for x in e), -box.lo[i]))
        out.append((e, box.hi[i]))
    return out


def _raw_vertices(halfspaces: Sequence[Halfspace], d: int) -> list[tuple[Fraction, ...]]:
    found = set()
    for combo in itertools.combinations(range(len(halfspaces)), d):
        A = [halfspaces[i][0] for i in combo]
        b = [halfspaces[i][1] for i in combo]
        x = solve_square(A, b)
        if x is None:
            continue
        x = tuple(x)
        if x not in found and all(dot(a, x) <= c for a, c in halfspaces):
            found.add(x)
    return sorted(found)


def _is_bounded(halfspaces: Sequence[Halfspace], d: int) -> bool:
    # nontrivial recession cone {y : A y <= 0} <=> some +-y_i can reach 1 in it
    for i in range(d):
        for s in (1, -1):
            b = SystemBuilder(d)
            for a, _ in halfspaces:
                b.le(dict(enumerate(a)), 0)
            b.le({i: s}, 1)
            res = solve_lp(b.build(), [Fraction(s) if j == i else Fraction(0) for j in range(d)])
            if res.value is not None and res.value > 0:
                return False
    return True


def _feasible(halfspaces: Sequence[Halfspace], d: int) -> bool:
    b = SystemBuilder(d)
    for a, c in halfspaces:
        b.le(dict(enumerate(a)), c)
    return solve_lp(b.build()).feasible


def vertex_enumeration(halfspaces: Sequence[Halfspace], d: int | None = None) -> list[tuple[Fraction, ...]]:
    """Exact vertices of ``{x : a.x <= b}``; empty list iff the set is empty."""
    hs = [(rat_vector(a), rat(b)) for a, b in halfspaces]
    if d is None:
        if not hs:
            raise InputError("dimension needed for an empty halfspace list")
        d = len(hs[0][0])
    if not _feasible(hs, d):
        return []
    if not _is_bounded(hs, d):
        raise BoundednessError("halfspace intersection is unbounded")
    return _raw_vertices(hs, d)


@dataclass(frozen=True, eq=False)
class Polytope:
    """Bounded intersection of halfspaces; vertices are computed lazily."""

    halfspaces: tuple[Halfspace, ...]
    d: int

    @classmethod
    def from_halfspaces(cls, halfspaces: Sequence[Halfspace], d: int | None = None, check: bool = True):
        hs = tuple((rat_vector(a), rat(b)) for a, b in halfspaces)
        d = d if d is not None else len(hs[0][0])
        if check and _feasible(hs, d) and not _is_bounded(hs, d):
            raise BoundednessError("halfspace intersection is unbounded")
        return cls(hs, d)

    @classmethod
    def from_box(cls, box: Box) -> "Polytope":
        return cls(tuple(box_halfspaces(box)), box.d)

    def intersect(self, halfspaces: Sequence[Halfspace]) -> "Polytope":
        return Polytope(self.halfspaces + tuple((rat_vector(a), rat(b)) for a, b in halfspaces), self.d)

    @cached_property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        return _raw_vertices(self.halfspaces, self.d)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains_point(self, x) -> bool:
        return all(dot(a, x) <= b for a, b in self.halfspaces)

    def bounding_box(self) -> Box:
        V = self.vertices
        if not V:
            raise DomainError("empty polytope has no bounding box")
        return Box(tuple(min(v[i] for v in V) for i in range(self.d)), tuple(max(v[i] for v in V) for i in range(self.d)))


def _pulling_simplices(V: list[tuple[Fraction, ...]], halfspaces: Sequence[Halfspace], d: int):
    tight = [frozenset(i for i, v in enumerate(V) if dot(a, v) == b) for a, b in halfspaces]
    dim_cache: dict[frozenset, int] = {}

    def dim(S):
        if S not in dim_cache:
            dim_cache[S] = affine_dimension([V[i] for i in sorted(S)])
        return dim_cache[S]

    def tri(S: frozenset, k: int):
        if k == 0:
            return [(min(S),)]
        apex = min(S)
        facets = set()
        for T in tight:
            F = S & T
            if F and F != S and apex not in F and dim(F) == k - 1:
                facets.add(F)
        out = []
        for F in sorted(facets, key=sorted):
            out.extend((apex,) + s for s in tri(F, k - 1))
        return out

    return tri(frozenset(range(len(V))), d)


def polytope_volume(p: Polytope) -> Fraction:
    """Exact d-volume (0 for empty or lower-dimensional polytopes)."""
    V = p.vertices
    if len(V) <= p.d or affine_dimension(V) < p.d:
        return Fraction(0)
    total = Fraction(0)
    for simplex in _pulling_simplices(V, p.halfspaces, p.d):
        v0 = V[simplex[0]]
        M = [[a - b for a, b in zip(V[i], v0)] for i in simplex[1:]]
        total += abs(det(M))
    return total / math.factorial(p.d)


def box_polytope_color_measures(coloring: GridColoring, p: Polytope) -> tuple[Fraction, ...]:
    """Exact measure of each colour inside ``p`` (per-cell intersection volumes)."""
    out = [Fraction(0)] * coloring.k
    if p.is_empty:
        return tuple(out)
    bb = p.bounding_box()
    if not coloring.bounds.contains(bb):
        raise DomainError("polytope leaves the colouring domain")
    per_axis = [coloring.overlaps(i, bb.lo[i], bb.hi[i]) for i in range(p.d)]
    for combo in itertools.product(*per_axis):
        idx = tuple(g for g, _ in combo)
        cell = coloring.cell_box(idx)
        corners = list(itertools.product(*zip(cell.lo, cell.hi)))
        if any(all(dot(a, c) >= b for c in corners) for a, b in p.halfspaces):
            continue  # cell lies on the far side of some facet
        if all(dot(a, c) <= b for a, b in p.halfspaces for c in corners):
            vol = cell.volume
        else:
            vol = polytope_volume(Polytope(tuple(box_halfspaces(cell)) + p.halfspaces, p.d))
        out[coloring.colors[idx] - 1] += vol
    return tuple(out)


def inscribed_cube_side(p: Polytope) -> Fraction:
    """Largest side of an axis-aligned cube contained in ``p`` (exact LP)."""
    d = p.d
    b = SystemBuilder(d + 1)
    for a, c in p.halfspaces:
        row = dict(enumerate(a))
        row[d] = sum((abs(x) for x in a), Fraction(0)) / 2
        b.le(row, c)
    b.ge({d: 1}, 0)
    res = solve_lp(b.build(), [0] * d + [1])
    if res.status == "infeasible":
        raise DomainError("empty polytope has no inscribed cube")
    if res.status == "unbounded":
        raise BoundednessError("polytope is unbounded")
    return res.value


SignVector = tuple[int, ...]


@dataclass(frozen=True)
class ArbitrarySplitting:
    """Hyperplane cuts of ``box``; labels keyed by arrangement sign vectors (+1: normal.x > offset)."""

    box: Box
    hyperplanes: tuple[Hyperplane, ...]
    labeling: Mapping[SignVector, int]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "labeling", {tuple(k): int(v) for k, v in dict(self.labeling).items()})
        for key, lab in self.labeling.items():
            if len(key) != len(self.hyperplanes) or any(s not in (-1, 1) for s in key):
                raise InputError(f"bad sign vector {key}")
            if not 1 <= lab <= self.q:
                raise InputError(f"label {lab} outside 1..{self.q}")

    def __hash__(self):
        return hash((self.box, self.hyperplanes, tuple(sorted(self.labeling.items())), self.q))


def arrangement_cells(box: Box, hyperplanes: Sequence[Hyperplane]) -> list[tuple[SignVector, Polytope]]:
    """Positive-volume cells of the arrangement inside ``box``, by sign vector."""
    base = Polytope.from_box(box)
    out = []
    for signs in itertools.product((-1, 1), repeat=len(hyperplanes)):
        cell = base.intersect([h.halfspace(s) for h, s in zip(hyperplanes, signs)])
        if polytope_volume(cell) > 0:
            out.append((signs, cell))
    return out


@dataclass(frozen=True)
class ArbitraryVerification:
    part_measures: PartMeasures
    granularity: Fraction
    fair: bool


def verify_arbitrary_splitting(coloring: GridColoring, s: ArbitrarySplitting) -> ArbitraryVerification:
    if not coloring.bounds.contains(s.box):
        raise DomainError("splitting box is not inside the colouring domain")
    rows = [[Fraction(0)] * coloring.k for _ in range(s.q)]
    gran = None
    for signs, cell in arrangement_cells(s.box, s.hyperplanes):
        label = s.labeling.get(signs)
        if label is None:
            raise InputError(f"nonempty cell {signs} has no label")
        for j, m in enumerate(box_polytope_color_measures(coloring, cell)):
            rows[label - 1][j] += m
        g = inscribed_cube_side(cell)
        gran = g if gran is None else min(gran, g)
    pm = PartMeasures(tuple(tuple(r) for r in rows))
    return ArbitraryVerification(pm, gran if gran is not None else Fraction(0), is_fair(pm))


__all__ = [
    "ArbitrarySplitting",
    "ArbitraryVerification",
    "Hyperplane",
    "Polytope",
    "arrangement_cells",
    "box_halfspaces",
    "box_polytope_color_measures",
    "inscribed_cube_side",
    "polytope_volume",
    "verify_arbitrary_splitting",
    "vertex_enumeration",
]
