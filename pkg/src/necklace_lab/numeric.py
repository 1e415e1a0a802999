"""Multistart numerical search for axis-parallel fair splittings when d >= 2.

Colour amounts in a box are read off cumulative measure functions; on each
grid cell these are multilinear, so multilinear interpolation between grid
breakpoints is exact and every piece measure is an inclusion-exclusion over
its corners. Floats are only used to find candidates: a candidate is reported
only after its cut coordinates are snapped to rationals and the splitting is
re-verified exactly. Failing to find one proves nothing.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.optimize import least_squares

from .core import AxisCut, Box, GridColoring, Splitting, granularity_axis, is_fair, part_measures
from .errors import DomainError, InputError
from .exact import rat
from .labeling import restricted_growth
from .parallel import ordered_map

RESIDUAL_TOL = 1e-12
SNAP_DENOMINATORS = (2**8, 2**16, 2**24, 2**32, 2**48)
CHUNK = 8  # patterns evaluated per round; fixed so results do not depend on the worker count


@dataclass(frozen=True)
class SearchBudget:
    starts: int = 8  # optimiser runs per pattern
    max_nfev: int = 200
    seed: int = 0


class CumulativeMeasure:
    """``F_j(x)``: measure of colour ``j`` in ``[lower corner, x]``, interpolated exactly."""

    def __init__(self, coloring: GridColoring):
        self.d = coloring.d
        self.k = coloring.k
        grid = [np.array([float(b) for b in axis]) for axis in coloring.breakpoints]
        widths = [np.diff(g) for g in grid]
        vol = widths[0]
        for w in widths[1:]:
            vol = np.multiply.outer(vol, w)
        dens = np.stack([(coloring.colors == j) * vol for j in range(1, self.k + 1)], axis=-1)
        cum = dens
        for axis in range(self.d):
            cum = np.cumsum(cum, axis=axis)
            pad = [(0, 0)] * (self.d + 1)
            pad[axis] = (1, 0)
            cum = np.pad(cum, pad)
        self.lo = np.array([g[0] for g in grid])
        self.hi = np.array([g[-1] for g in grid])
        self.interp = RegularGridInterpolator(grid, cum, method="linear")
        self.corners = np.array(list(itertools.product((0, 1), repeat=self.d)))
        self.signs = np.array([(-1) ** (self.d - int(c.sum())) for c in self.corners], dtype=float)

    def box_measures(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """``(P, d)`` corners -> ``(P, k)`` colour measures."""
        lo = np.clip(lo, self.lo, self.hi)
        hi = np.clip(hi, self.lo, self.hi)
        pts = np.where(self.corners[None, :, :] == 1, hi[:, None, :], lo[:, None, :])
        vals = self.interp(pts.reshape(-1, self.d)).reshape(len(lo), len(self.corners), self.k)
        return np.einsum("c,pck->pk", self.signs, vals)


@dataclass(frozen=True)
class _Pattern:
    counts: tuple[int, ...]
    labeling: tuple[int, ...]


def _count_vectors(d: int, t) -> list[tuple[int, ...]]:
    if isinstance(t, (tuple, list)):
        if len(t) != d or any(x < 0 for x in t):
            raise InputError("per-axis cut counts must be d non-negative integers")
        return [tuple(int(x) for x in t)]
    if t < 0:
        raise InputError("t must be non-negative")
    out = []
    for total in range(t + 1):
        out.extend(c for c in itertools.product(range(total + 1), repeat=d) if sum(c) == total)
    return out


def patterns(d: int, q: int, t) -> list[_Pattern]:
    """Per-axis cut counts (by total, then lexicographically) times labelings using all ``q`` labels."""
    out = []
    for counts in _count_vectors(d, t):
        npieces = int(np.prod([c + 1 for c in counts]))
        for lab in restricted_growth(npieces, q):
            if len(set(lab)) == q:
                out.append(_Pattern(counts, lab))
    return out


class _Evaluator:
    def __init__(self, cm: CumulativeMeasure, box: Box, pattern: _Pattern, gamma: float):
        self.cm = cm
        self.pattern = pattern
        self.lo = np.array([float(x) for x in box.lo])
        self.ext = np.array([float(x) for x in box.extents])
        self.gamma = gamma
        self.free = self.ext - (np.array(pattern.counts) + 1) * gamma
        q = max(pattern.labeling)
        P = len(pattern.labeling)
        self.A = np.zeros((q, P))
        for p, lab in enumerate(pattern.labeling):
            self.A[lab - 1, p] = 1.0
        self.offsets = np.cumsum((0,) + pattern.counts)
        total = cm.box_measures(self.lo[None, :], (self.lo + self.ext)[None, :])[0]
        self.present = total > 0
        self.scale = np.where(self.present, total, 1.0)

    @property
    def feasible(self) -> bool:
        return bool(np.all(self.free >= 0))

    def cuts(self, u: np.ndarray) -> list[np.ndarray]:
        out = []
        for i, t in enumerate(self.pattern.counts):
            ui = np.sort(u[self.offsets[i] : self.offsets[i + 1]])
            out.append(self.lo[i] + self.gamma * np.arange(1, t + 1) + ui * self.free[i])
        return out

    def residual_at(self, cuts: Sequence[np.ndarray]) -> np.ndarray:
        slabs = [np.concatenate(([self.lo[i]], c, [self.lo[i] + self.ext[i]])) for i, c in enumerate(cuts)]
        idx = np.array(list(itertools.product(*(range(len(s) - 1) for s in slabs))))
        lo = np.stack([slabs[i][idx[:, i]] for i in range(len(slabs))], axis=1)
        hi = np.stack([slabs[i][idx[:, i] + 1] for i in range(len(slabs))], axis=1)
        parts = self.A @ self.cm.box_measures(lo, hi)
        res = (parts[1:] - parts[0]) / self.scale
        return res[:, self.present].ravel()

    def residual(self, u: np.ndarray) -> np.ndarray:
        return self.residual_at(self.cuts(u))


def _seeds(ev: _Evaluator, coloring: GridColoring, rng: np.random.Generator, starts: int, n: int) -> list[np.ndarray]:
    out = []
    if n == 0:
        return [np.zeros(0)]
    # degenerate start: every cut on a grid breakpoint (a discrete subproblem)
    u = []
    for i, t in enumerate(ev.pattern.counts):
        if t == 0:
            continue
        bps = np.array([float(b) for b in coloring.breakpoints[i]])
        inner = bps[(bps > ev.lo[i]) & (bps < ev.lo[i] + ev.ext[i])]
        if len(inner) == 0 or ev.free[i] <= 0:
            u.extend(rng.random(t))
        else:
            pick = np.sort(rng.choice(inner, size=t, replace=len(inner) < t))
            u.extend(np.clip((pick - ev.lo[i] - ev.gamma * np.arange(1, t + 1)) / ev.free[i], 0, 1))
    out.append(np.array(u))
    if starts > 1:
        out.append(np.concatenate([(np.arange(1, t + 1)) / (t + 1) for t in ev.pattern.counts if t]))
    while len(out) < starts:
        out.append(rng.random(n))
    return out[:starts]


def _snap(coloring: GridColoring, box: Box, ev: _Evaluator, cuts: list[np.ndarray], q: int, gamma: Fraction):
    for D in SNAP_DENOMINATORS:
        exact = [[Fraction(float(v)).limit_denominator(D) for v in c] for c in cuts]
        if float(np.max(np.abs(ev.residual_at([np.array([float(v) for v in c]) for c in exact])), initial=0.0)) > RESIDUAL_TOL:
            continue
        try:
            s = Splitting(box, tuple(AxisCut(i, v) for i, c in enumerate(exact) for v in c), ev.pattern.labeling, q)
        except InputError:
            continue
        if any(not box.lo[c.axis] <= c.coordinate <= box.hi[c.axis] for c in s.cuts):
            continue
        if granularity_axis(s) >= gamma and is_fair(part_measures(coloring, s)):
            return s
    return None


@dataclass
class _PatternOutcome:
    witness: Splitting | None
    starts: int
    best: float


def _run_pattern(args) -> _PatternOutcome:
    coloring, box, q, gamma, pattern, index, budget = args
    cm = CumulativeMeasure(coloring)
    ev = _Evaluator(cm, box, pattern, float(gamma))
    if not ev.feasible:
        return _PatternOutcome(None, 0, float("inf"))
    rng = np.random.default_rng(np.random.SeedSequence(budget.seed, spawn_key=(index,)))
    n = sum(pattern.counts)
    best = float("inf")
    runs = 0
    for x0 in _seeds(ev, coloring, rng, budget.starts, n):
        runs += 1
        if n == 0:
            u = x0
        else:
            sol = least_squares(
                ev.residual, x0, bounds=(0.0, 1.0), method="trf", max_nfev=budget.max_nfev,
                xtol=1e-15, ftol=1e-15, gtol=1e-15,
            )
            u = sol.x
        r = ev.residual(u)
        best = min(best, float(np.max(np.abs(r), initial=0.0)))
        w = _snap(coloring, box, ev, ev.cuts(u), q, gamma)
        if w is not None:
            return _PatternOutcome(w, runs, 0.0)
    return _PatternOutcome(None, runs, best)


@dataclass
class NumericSearchResult:
    """Witness (exactly verified) or a "not found" report. "Not found" is not a certificate."""

    witness: Splitting | None
    patterns: int
    starts: int
    best_residual: float
    budget: SearchBudget = field(default_factory=SearchBudget)

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "patterns_explored": self.patterns,
            "optimizer_starts": self.starts,
            "best_residual": self.best_residual,
            "budget": asdict(self.budget),
            "certificate": False,
        }


def solve_grid_axis_cuts_md(
    coloring: GridColoring,
    box: Box | None = None,
    q: int = 2,
    t=1,
    gamma=0,
    budget: SearchBudget | None = None,
    jobs: int = 1,
) -> NumericSearchResult:
    """Search fair ``q``-splittings of ``box`` by axis cuts.

    ``t`` is either a total (all per-axis distributions with at most ``t``
    cuts) or a tuple of exact per-axis counts.
    """
    if coloring.d < 2:
        raise InputError("use the exact one-dimensional solver for d = 1")
    budget = budget or SearchBudget()
    box = coloring.bounds if box is None else box
    if box.d != coloring.d:
        raise InputError("box dimension differs from the colouring")
    if not coloring.bounds.contains(box):
        raise DomainError("box is not inside the colouring domain")
    if any(e <= 0 for e in box.extents):
        raise InputError("the necklace box must be nontrivial")
    gamma = rat(gamma)
    pats = patterns(coloring.d, q, t)
    explored = starts = 0
    best = float("inf")
    for lo in range(0, len(pats), CHUNK):
        chunk = [(coloring, box, q, gamma, p, lo + i, budget) for i, p in enumerate(pats[lo : lo + CHUNK])]
        outs = ordered_map(_run_pattern, chunk, jobs)
        explored += len(outs)
        starts += sum(o.starts for o in outs)
        best = min([best] + [o.best for o in outs])
        for o in outs:
            if o.witness is not None:
                return NumericSearchResult(o.witness, explored, starts, 0.0, budget)
    return NumericSearchResult(None, explored, starts, best, budget)


__all__ = ["CumulativeMeasure", "NumericSearchResult", "SearchBudget", "patterns", "solve_grid_axis_cuts_md"]
