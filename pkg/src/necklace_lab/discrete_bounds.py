"""Counting splittable subsets of a discrete cube, hard subsets, and multicolour composition.

A subset ``N`` of ``{1..n}^d`` is splittable with ``t`` cuts if some axis cut
set of size at most ``t`` and some assignment of pieces to ``q`` parts gives
every part the same number of points of ``N`` (points outside ``N`` are not
counted). Subsets are bitmasks over cells in C order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DiscreteNecklace
from .errors import InputError
from .labeling import restricted_growth
from .multidim import min_cuts_cells

MAX_CELLS = 16


def _cell_masks(n: int, d: int, positions: Sequence[Sequence[int]]) -> list[int]:
    """Bitmask of each piece (pieces in lexicographic slab order)."""
    bounds = [[0, *ps, n] for ps in positions]
    shape = (n,) * d
    masks = []
    for idx in itertools.product(*(range(len(b) - 1) for b in bounds)):
        m = 0
        for cell in itertools.product(*(range(bounds[i][s], bounds[i][s + 1]) for i, s in enumerate(idx))):
            m |= 1 << int(np.ravel_multi_index(cell, shape))
        masks.append(m)
    return masks


def _cut_sets(n: int, d: int, t: int):
    candidates = [(axis, p) for axis in range(d) for p in range(1, n)]
    for size in range(min(t, len(candidates)) + 1):
        for combo in itertools.combinations(candidates, size):
            positions = [[] for _ in range(d)]
            for axis, p in combo:
                positions[axis].append(p)
            yield positions


@dataclass(frozen=True)
class SubsetCount:
    n: int
    d: int
    q: int
    t: int
    splittable: int
    divisible: int  # subsets whose size is divisible by q
    total: int  # 2^(n^d)


def splittable_mask(n: int, d: int, q: int, t: int, max_cells: int = MAX_CELLS) -> np.ndarray:
    """Boolean array over all ``2^(n^d)`` subsets: splittable with at most ``t`` cuts."""
    cells = n**d
    if cells > max_cells:
        raise InputError(f"n^d = {cells} exceeds the enumeration limit {max_cells}")
    if n < 1 or d < 1 or q < 1 or t < 0:
        raise InputError("need n, d, q >= 1 and t >= 0")
    subsets = np.arange(1 << cells, dtype=np.int64)
    popcount = np.zeros(1 << cells, dtype=np.int8)
    for b in range(cells):
        popcount += ((subsets >> b) & 1).astype(np.int8)
    ok = np.zeros(1 << cells, dtype=bool)
    for positions in _cut_sets(n, d, t):
        pieces = _cell_masks(n, d, positions)
        for lab in restricted_growth(len(pieces), q):
            parts = [0] * q
            for m, l in zip(pieces, lab):
                parts[l - 1] |= m
            first = popcount[subsets & parts[0]]
            fair = np.ones_like(ok)
            for p in parts[1:]:
                fair &= popcount[subsets & p] == first
            ok |= fair
    return ok


def count_splittable_subsets(n: int, d: int, q: int, t: int, max_cells: int = MAX_CELLS) -> SubsetCount:
    ok = splittable_mask(n, d, q, t, max_cells)
    cells = n**d
    divisible = sum(math.comb(cells, s) for s in range(0, cells + 1, q))
    return SubsetCount(n, d, q, t, int(ok.sum()), divisible, 1 << cells)


# ---------------------------------------------------------------- estimate


def fair_sets_for_sizes(a: Sequence[int]) -> int:
    """Subsets meeting parts of sizes ``a`` in equally many points: sum_i prod_r C(a_r, i)."""
    return sum(math.prod(math.comb(x, i) for x in a) for i in range(min(a) + 1))


def _compositions(total: int, q: int):
    """Non-increasing ``q``-tuples summing to ``total`` (the sum is symmetric in its arguments)."""

    def rec(left, parts, cap):
        if parts == 1:
            if left <= cap:
                yield (left,)
            return
        for x in range(min(left, cap), -1, -1):
            for rest in rec(left - x, parts - 1, x):
                yield (x,) + rest

    return rec(total, q, total)


@dataclass(frozen=True)
class CountingBound:
    n: int
    d: int
    q: int
    t: int
    cut_choices: int  # (dn)^t
    labelings: int  # q^((t+1)^d)
    max_fair_sets: int  # max over part sizes of sum_i prod_r C(a_r, i)
    argmax: tuple[int, ...]
    balanced: tuple[int, ...]
    balanced_is_max: bool
    estimate: int
    total: int  # 2^(n^d)

    @property
    def estimate_below_total(self) -> bool:
        """True when the estimate proves some subset needs more than ``t`` cuts."""
        return self.estimate < self.total


def counting_bound_report(n: int, d: int, q: int, t: int) -> CountingBound:
    if min(n, d, q) < 1 or t < 0:
        raise InputError("need n, d, q >= 1 and t >= 0")
    cells = n**d
    best, arg = -1, None
    for a in _compositions(cells, q):
        v = fair_sets_for_sizes(a)
        if v > best:
            best, arg = v, a
    lo, extra = divmod(cells, q)
    balanced = tuple([lo + 1] * extra + [lo] * (q - extra))
    cut_choices = (d * n) ** t
    labelings = q ** ((t + 1) ** d)
    return CountingBound(
        n, d, q, t, cut_choices, labelings, best, arg, balanced,
        fair_sets_for_sizes(balanced) == best, cut_choices * labelings * best, 1 << cells,
    )


# ------------------------------------------------------------ hard subsets


@dataclass(frozen=True)
class HardSubset:
    n: int
    d: int
    q: int
    cells: frozenset  # 1-based lattice cells
    min_cuts: int
    target: int

    def indicator(self) -> np.ndarray:
        arr = np.zeros((self.n,) * self.d, dtype=np.int64)
        for c in self.cells:
            arr[tuple(x - 1 for x in c)] = 1
        return arr


def min_cuts_subset(indicator: np.ndarray, q: int, t_cap: int | None = None) -> int | None:
    """Fewest axis cuts splitting the marked cells fairly (unmarked cells are ignored)."""
    cap = sum(s - 1 for s in indicator.shape) if t_cap is None else t_cap
    found = min_cuts_cells(np.asarray(indicator, dtype=np.int64), 1, q, cap)
    return None if found is None else found[0]


def find_hard_subset(n: int, d: int, q: int, max_cells: int = MAX_CELLS) -> HardSubset | None:
    """First subset (by size, then bitmask) needing at least ``ceil(d q / 2)`` cuts."""
    cells = n**d
    if cells > max_cells:
        raise InputError(f"n^d = {cells} exceeds the enumeration limit {max_cells}")
    target = -(-d * q // 2)
    shape = (n,) * d
    for size in range(0, cells + 1, q):
        for combo in itertools.combinations(range(cells), size):
            ind = np.zeros(cells, dtype=np.int64)
            ind[list(combo)] = 1
            ind = ind.reshape(shape)
            if min_cuts_subset(ind, q, target - 1) is not None:
                continue
            m = min_cuts_subset(ind, q)
            pts = frozenset(tuple(int(x) + 1 for x in np.unravel_index(i, shape)) for i in combo)
            return HardSubset(n, d, q, pts, m if m is not None else -1, target)
    return None


def compose_multicolor_hard_instance(n0: np.ndarray | HardSubset, k: int, q: int) -> DiscreteNecklace:
    """Copies of ``n0`` on the diagonal blocks of a cube of side ``(k-1) n0``, coloured ``2..k``; the rest colour 1."""
    ind = n0.indicator() if isinstance(n0, HardSubset) else np.asarray(n0, dtype=np.int64)
    if k < 2:
        raise InputError("need k >= 2")
    if len(set(ind.shape)) != 1:
        raise InputError("the hard instance must live in a cube")
    side, d = ind.shape[0], ind.ndim
    big = np.ones(((k - 1) * side,) * d, dtype=np.int64)
    for j in range(2, k + 1):
        off = (j - 2) * side
        block = tuple(slice(off, off + side) for _ in range(d))
        big[block] = np.where(ind != 0, j, big[block])
    counts = np.bincount(big.ravel(), minlength=k + 1)
    if counts[2] % q:
        raise InputError(f"the hard instance has {int(counts[2])} points, not divisible by q={q}")
    if counts[1] % q:
        raise InputError(f"colour 1 would have {int(counts[1])} cells, not divisible by q={q}")
    return DiscreteNecklace(big, q, k)


def report_rows(params: Sequence[tuple[int, int, int, int]]) -> list[dict]:
    """One CSV-ready row per ``(n, d, q, t)`` with exact counts and both sides of the estimate."""
    rows = []
    for n, d, q, t in params:
        c = count_splittable_subsets(n, d, q, t)
        b = counting_bound_report(n, d, q, t)
        rows.append({
            "n": n, "d": d, "q": q, "t": t,
            "splittable": c.splittable, "divisible": c.divisible, "total": c.total,
            "estimate": b.estimate, "estimate_dominates": b.estimate >= c.splittable,
        })
    return rows


__all__ = [
    "CountingBound",
    "HardSubset",
    "SubsetCount",
    "compose_multicolor_hard_instance",
    "count_splittable_subsets",
    "counting_bound_report",
    "fair_sets_for_sizes",
    "find_hard_subset",
    "min_cuts_subset",
    "report_rows",
    "splittable_mask",
]
