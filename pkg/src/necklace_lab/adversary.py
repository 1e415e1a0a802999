"""Adversarial colourings, degree-of-freedom audits and no-split certification.

The adversarial colouring splits the window ``[-n, n]^d`` into ``N^d`` equal
cells. Each cell gets a centred ``delta``-cube holding ``k - 1`` small cubes
of colours ``2..k`` laid along its diagonal, with side lengths that are random
rationals of ``B`` significant bits; everything else is white (colour 1) or
follows an optional base colouring.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .core import AxisCut, Box, GridColoring, Splitting, measure_vector
from .errors import DomainError, InputError
from .exact import rank as exact_rank
from .exact import rat
from .numeric import CumulativeMeasure, SearchBudget, solve_grid_axis_cuts_md
from .splitter1d import Search1DResult, search_window_1d

# ------------------------------------------------------------- colourings


@dataclass(frozen=True)
class AdversaryParams:
    d: int
    k: int
    q: int
    t: int
    n: int
    N: int | None = None
    delta: Fraction | None = None
    eps: Fraction = Fraction(1, 2)
    B: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or self.k < 2 or self.q < 2 or self.t < 0 or self.n < 1:
            raise InputError("need d >= 1, k >= 2, q >= 2, t >= 0, n >= 1")
        N = 4 * self.n**2 + 1 if self.N is None else int(self.N)
        object.__setattr__(self, "N", N)
        delta = Fraction(1, N * N) if self.delta is None else rat(self.delta)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "eps", rat(self.eps))
        if N <= 4 * self.n**2:
            raise InputError(f"need N > 4n^2 = {4 * self.n**2}, got N = {N}")
        if self.B < 1:
            raise InputError("bit length B must be positive")
        if self.eps <= 0 or delta <= 0:
            raise InputError("eps and delta must be positive")
        bound = min(self.eps / (2 * Fraction(N) ** self.d), (Fraction(2 * self.n, N)) ** self.d)
        if not delta**self.d < bound:
            raise InputError(f"delta^d = {delta ** self.d} violates delta^d < {bound}")

    @property
    def cell_side(self) -> Fraction:
        return Fraction(2 * self.n, self.N)

    @property
    def window(self) -> Box:
        return Box((-self.n,) * self.d, (self.n,) * self.d)


def _random_numerator(rng: np.random.Generator, B: int) -> int:
    nbytes = (B + 7) // 8
    low = int.from_bytes(rng.bytes(nbytes), "big") & ((1 << (B - 1)) - 1)
    return (1 << (B - 1)) | low


def adversary_sides(p: AdversaryParams) -> dict[tuple[tuple[int, ...], int], Fraction]:
    """Side length of the colour-``j`` cube in background cell ``idx`` (0-based), keyed ``(idx, j)``."""
    rng = np.random.default_rng(np.random.SeedSequence(p.seed))
    unit = p.delta / (p.k - 1)
    out = {}
    for idx in itertools.product(range(p.N), repeat=p.d):
        for j in range(2, p.k + 1):
            out[(idx, j)] = unit * Fraction(_random_numerator(rng, p.B), 1 << p.B)
    return out


def adversary_cubes(p: AdversaryParams) -> list[tuple[tuple[int, ...], int, Box]]:
    """``(cell index, colour, cube)`` for every small coloured cube."""
    sides = adversary_sides(p)
    h = p.cell_side
    unit = p.delta / (p.k - 1)
    out = []
    for idx in itertools.product(range(p.N), repeat=p.d):
        # lower corner of the centred delta-cube
        base = tuple(-p.n + h * i + (h - p.delta) / 2 for i in idx)
        for j in range(2, p.k + 1):
            corner = tuple(b + (j - 2) * unit for b in base)
            out.append((idx, j, Box.cube(corner, sides[(idx, j)])))
    return out


def generate_bad_coloring(p: AdversaryParams, base: np.ndarray | None = None) -> GridColoring:
    """The adversarial grid colouring of ``[-n, n]^d``; deterministic in ``p.seed``.

    ``base`` (shape ``(N,)*d``, colours ``1..k``) colours the background cells;
    by default they are white.
    """
    cubes = adversary_cubes(p)
    h = p.cell_side
    axes = []
    for a in range(p.d):
        pts = {-p.n + h * i for i in range(p.N + 1)}
        for _, _, c in cubes:
            pts.add(c.lo[a])
            pts.add(c.hi[a])
        axes.append(sorted(pts))
    shape = tuple(len(ax) - 1 for ax in axes)
    if base is None:
        colors = np.ones(shape, dtype=np.int64)
    else:
        base = np.asarray(base)
        if base.shape != (p.N,) * p.d or base.min() < 1 or base.max() > p.k:
            raise InputError(f"base colouring must have shape {(p.N,) * p.d} and colours in 1..{p.k}")
        # each fine cell takes the colour of the background cell containing it
        owner = [np.array([min(int((ax[g] + p.n) / h), p.N - 1) for g in range(len(ax) - 1)]) for ax in axes]
        colors = base[np.ix_(*owner)].astype(np.int64)
    for _, j, c in cubes:
        sl = tuple(slice(bisect.bisect_left(axes[a], c.lo[a]), bisect.bisect_left(axes[a], c.hi[a])) for a in range(p.d))
        colors[sl] = j
    return GridColoring(tuple(tuple(ax) for ax in axes), colors, p.k)


def white_distance(p: AdversaryParams) -> Fraction:
    """Measure of the window where the colouring differs from all-white."""
    return sum((s**p.d for s in adversary_sides(p).values()), Fraction(0))


# ------------------------------------------------------------------ audit


@dataclass(frozen=True)
class DofAudit:
    """Unknowns versus independent fairness equations for one regime.

    ``verdict`` is the exact evaluation of ``k(q-1) > rhs``: True means the
    threshold guaranteeing (dense) colourings without small fair splittings holds.
    """

    d: int
    k: int
    q: int
    t: int
    cut_type: str
    target: str
    shape: str
    regime: str
    lhs: int
    rhs: int
    verdict: bool
    unknowns: int
    color_equations: int
    volume_equations: int

    @property
    def formula(self) -> str:
        return f"k(q-1) = {self.lhs} > {self.rhs}"


def audit_dof(d: int, k: int, q: int, t: int, cut_type: str = "axis", target: str = "window", shape: str = "cube") -> DofAudit:
    if cut_type not in ("axis", "arbitrary"):
        raise InputError("cut_type must be 'axis' or 'arbitrary'")
    if target not in ("window", "fixed"):
        raise InputError("target must be 'window' or 'fixed'")
    if shape not in ("cube", "cuboid"):
        raise InputError("shape must be 'cube' or 'cuboid'")
    if min(d, k, t) < 1 or q < 2:
        raise InputError("need d, k, t >= 1 and q >= 2")
    per_cut = 1 if cut_type == "axis" else d
    cut_dof = per_cut * t
    if target == "fixed":
        regime, rhs = f"{cut_type}-fixed", cut_dof + q - 2
        unknowns = cut_dof
    elif shape == "cuboid":
        regime, rhs = f"{cut_type}-window-cuboid", cut_dof + 2 * d + q - 2
        unknowns = cut_dof + 2 * d
    elif cut_type == "axis" and d == 1:
        regime, rhs = "axis-window-d1", t + 2
        unknowns = t + 2
    else:
        regime, rhs = f"{cut_type}-window", cut_dof + d + q - 1
        unknowns = cut_dof + d + 1
    lhs = k * (q - 1)
    return DofAudit(d, k, q, t, cut_type, target, shape, regime, lhs, rhs, lhs > rhs, unknowns, (k - 1) * (q - 1), q - 1)


# -------------------------------------------------------- equation systems


@dataclass(frozen=True)
class SplitPattern:
    """Axis of every cut (cuts on one axis are ordered) plus a label per piece, pieces in lex slab order."""

    axes: tuple[int, ...]
    labeling: tuple[int, ...]

    def counts(self, d: int) -> tuple[int, ...]:
        return tuple(sum(1 for a in self.axes if a == i) for i in range(d))


@dataclass
class EquationSystem:
    """Fairness residuals of a pattern as functions of ``(alpha_0, alpha_1..alpha_d, beta_1..beta_t)``.

    The necklace is ``[alpha_i, alpha_i + alpha_0]`` on axis ``i``; ``beta_m``
    is the coordinate of cut ``m`` on axis ``pattern.axes[m]``. Residuals list
    ``W_{j,l} - W_{j,1}`` for colours ``j = 2..k`` and parts ``l = 2..q``, then
    the ``q - 1`` part-volume differences. With ``colors=False`` only the volume
    equations are kept.
    """

    coloring: GridColoring
    pattern: SplitPattern
    q: int
    colors: bool = True
    _cm: CumulativeMeasure | None = field(default=None, repr=False)

    def __post_init__(self):
        d = self.coloring.d
        if any(not 0 <= a < d for a in self.pattern.axes):
            raise InputError("cut axis out of range")
        npieces = math.prod(c + 1 for c in self.pattern.counts(d))
        if len(self.pattern.labeling) != npieces:
            raise InputError(f"pattern needs {npieces} labels, got {len(self.pattern.labeling)}")
        if any(not 1 <= x <= self.q for x in self.pattern.labeling):
            raise InputError(f"labels must lie in 1..{self.q}")

    @property
    def d(self) -> int:
        return self.coloring.d

    @property
    def n_unknowns(self) -> int:
        return 1 + self.d + len(self.pattern.axes)

    @property
    def n_equations(self) -> int:
        k = self.coloring.k
        return ((k - 1) if self.colors else 0) * (self.q - 1) + (self.q - 1)

    def splitting(self, z: Sequence[Fraction]) -> Splitting:
        """The splitting at exact point ``z``; raises DomainError outside the pattern's region."""
        z = [rat(v) for v in z]
        if len(z) != self.n_unknowns:
            raise InputError(f"expected {self.n_unknowns} unknowns")
        d = self.d
        a0, corner, betas = z[0], z[1 : d + 1], z[d + 1 :]
        if a0 <= 0:
            raise DomainError("side alpha_0 must be positive")
        box = Box(tuple(corner), tuple(c + a0 for c in corner))
        if not self.coloring.bounds.contains(box):
            raise DomainError("necklace leaves the colouring domain")
        for i in range(d):
            on = [b for b, a in zip(betas, self.pattern.axes) if a == i]
            seq = [box.lo[i]] + on + [box.hi[i]]
            if any(y <= x for x, y in zip(seq, seq[1:])):
                raise DomainError(f"cuts on axis {i} are not strictly inside and increasing")
        cuts = tuple(AxisCut(a, b) for a, b in zip(self.pattern.axes, betas))
        return Splitting(box, cuts, self.pattern.labeling, self.q)

    def part_amounts(self, z: Sequence[Fraction]) -> list[list[Fraction]]:
        """``W[l][j]``: exact amount of colour ``j+1`` in part ``l+1``."""
        s = self.splitting(z)
        W = [[Fraction(0)] * self.coloring.k for _ in range(self.q)]
        for _, label, piece in s.pieces():
            for j, m in enumerate(measure_vector(self.coloring, piece)):
                W[label - 1][j] += m
        return W

    def residual(self, z: Sequence[Fraction]) -> tuple[Fraction, ...]:
        W = self.part_amounts(z)
        return self._assemble(W)

    def _assemble(self, W):
        out = []
        if self.colors:
            for l in range(1, self.q):
                for j in range(1, self.coloring.k):
                    out.append(W[l][j] - W[0][j])
        vol = [sum(row) for row in W]
        out.extend(v - vol[0] for v in vol[1:])
        return tuple(out)

    def residual_float(self, z: Sequence[float]) -> np.ndarray:
        if self._cm is None:
            self._cm = CumulativeMeasure(self.coloring)
        d = self.d
        z = np.asarray(z, dtype=float)
        a0, corner, betas = z[0], z[1 : d + 1], z[d + 1 :]
        slabs = []
        for i in range(d):
            on = sorted(b for b, a in zip(betas, self.pattern.axes) if a == i)
            slabs.append(np.array([corner[i], *on, corner[i] + a0]))
        idx = np.array(list(itertools.product(*(range(len(s) - 1) for s in slabs))))
        lo = np.stack([slabs[i][idx[:, i]] for i in range(d)], axis=1)
        hi = np.stack([slabs[i][idx[:, i] + 1] for i in range(d)], axis=1)
        meas = self._cm.box_measures(lo, hi)
        W = np.zeros((self.q, self.coloring.k))
        for p, lab in enumerate(self.pattern.labeling):
            W[lab - 1] += meas[p]
        return np.array(self._assemble(W.tolist()), dtype=float)

    def _margin(self, z: Sequence[Fraction]) -> Fraction:
        """Distance from ``z``'s coordinates to the nearest grid breakpoint or neighbouring coordinate."""
        s = self.splitting(z)
        best = None
        for i in range(self.d):
            seq = s.slab_bounds(i)
            gaps = [y - x for x, y in zip(seq, seq[1:])]
            bp = self.coloring.breakpoints[i]
            for v in seq:
                pos = bisect.bisect_left(bp, v)
                near = [abs(v - bp[g]) for g in (pos - 1, pos) if 0 <= g < len(bp)]
                gaps.append(min(near))
            m = min(gaps)
            best = m if best is None else min(best, m)
        return best

    def jacobian(self, z: Sequence[Fraction]) -> list[list[Fraction]]:
        """Exact Jacobian at ``z`` (which must not sit on a breakpoint).

        Inside one grid-cell assignment every residual is a polynomial of degree
        at most ``d`` in each unknown, so differentiating the interpolating
        polynomial through ``2d + 1`` nearby rational samples is exact.
        """
        z = [rat(v) for v in z]
        margin = self._margin(z)
        if margin <= 0:
            raise DomainError("point lies on a breakpoint; the residual is not polynomial there")
        r = self.d
        h = margin / (4 * r + 4)
        nodes = list(range(-r, r + 1))
        # derivative at 0 of the Lagrange interpolant through the nodes
        weights = []
        for a in nodes:
            others = [b for b in nodes if b != a]
            denom = math.prod(Fraction(a - b) for b in others)
            # d/dx prod (x - b) at 0 = sum_c prod_{b != c} (0 - b)
            num = sum(math.prod(Fraction(-b) for b in others if b != c) for c in others)
            weights.append(num / denom / h)
        cols = []
        for v in range(len(z)):
            acc = [Fraction(0)] * self.n_equations
            for a, w in zip(nodes, weights):
                if w == 0:
                    continue
                zz = list(z)
                zz[v] += a * h
                acc = [x + w * y for x, y in zip(acc, self.residual(zz))]
            cols.append(acc)
        return [[cols[v][e] for v in range(len(z))] for e in range(self.n_equations)]


def build_equation_system(coloring: GridColoring, pattern: SplitPattern, q: int, colors: bool = True) -> EquationSystem:
    return EquationSystem(coloring, pattern, q, colors)


@dataclass(frozen=True)
class RankReport:
    ranks: tuple[int, ...]  # numeric rank at each sampled point
    max_rank: int
    n_equations: int
    n_unknowns: int
    on_solutions: bool
    attempts: int

    @property
    def trials(self) -> int:
        return len(self.ranks)


def numeric_rank(J: Sequence[Sequence[float]], cutoff: float = 1e-8) -> int:
    """Rank with singular values below ``cutoff * sigma_max`` treated as zero."""
    A = np.asarray(J, dtype=float)
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > cutoff * sv[0]))


def _random_point(es: EquationSystem, rng: np.random.Generator) -> list[Fraction]:
    b = es.coloring.bounds
    L = min(b.extents)
    a0 = Fraction(rng.uniform(0.3, 0.9)) * L
    corner = [lo + Fraction(rng.uniform(0.0, 1.0)) * (ext - a0) for lo, ext in zip(b.lo, b.extents)]
    betas = []
    per_axis: dict[int, list[Fraction]] = {}
    for i in range(es.d):
        cnt = sum(1 for a in es.pattern.axes if a == i)
        per_axis[i] = sorted(corner[i] + Fraction(u) * a0 for u in rng.uniform(0.05, 0.95, size=cnt))
    used = {i: 0 for i in range(es.d)}
    for a in es.pattern.axes:
        betas.append(per_axis[a][used[a]])
        used[a] += 1
    return [a0] + corner + betas


def _project(es: EquationSystem, z: list[Fraction]) -> list[Fraction] | None:
    """Move ``z`` onto the zero set of the residual (bounded least squares), or None.

    Residuals are divided by the box volume so that shrinking the necklace to
    a point, where every amount vanishes, does not count as a solution.
    """
    b = es.coloring.bounds
    L = float(min(b.extents))
    lo = [0.05 * L] + [float(x) for x in b.lo] + [float(b.lo[a]) for a in es.pattern.axes]
    hi = [L] + [float(x) for x in b.hi] + [float(b.hi[a]) for a in es.pattern.axes]

    def f(x):
        return es.residual_float(x) / x[0] ** es.d

    x0 = np.clip([float(v) for v in z], lo, hi)
    sol = least_squares(f, x0, bounds=(lo, hi), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
    if np.max(np.abs(f(sol.x)), initial=0.0) > 1e-12:
        return None
    return [Fraction(float(v)) for v in sol.x]


def jacobian_rank_check(
    es: EquationSystem,
    point: Sequence[Fraction] | None = None,
    trials: int = 20,
    seed: int = 0,
    on_solutions: bool = True,
    cutoff: float = 1e-8,
) -> RankReport:
    """Numeric Jacobian rank at ``point`` or at ``trials`` random points.

    With ``on_solutions`` random points are first projected onto the zero set
    of the residuals, which is where the unknowns of an actual fair splitting
    live; points that fail to project or leave the pattern's region are skipped.
    """
    ranks = []
    attempts = 0
    if point is not None:
        ranks.append(numeric_rank([[float(x) for x in row] for row in es.jacobian(point)], cutoff))
        attempts = 1
    else:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        while len(ranks) < trials and attempts < 20 * trials:
            attempts += 1
            z = _random_point(es, rng)
            if on_solutions:
                z = _project(es, z)
                if z is None:
                    continue
            try:
                J = es.jacobian(z)
            except (DomainError, InputError):
                continue
            ranks.append(numeric_rank([[float(x) for x in row] for row in J], cutoff))
    return RankReport(tuple(ranks), max(ranks, default=0), es.n_equations, es.n_unknowns, on_solutions, attempts)


def exact_jacobian_rank(es: EquationSystem, point: Sequence[Fraction]) -> int:
    return exact_rank(es.jacobian(point))


# ---------------------------------------------------------- certification


def certify_no_split_1d(
    coloring: GridColoring,
    q: int,
    t: int,
    gamma=None,
    window: Box | None = None,
    n: int | None = None,
    jobs: int = 1,
) -> Search1DResult:
    """Exact answer to "does some interval in the window have a fair splitting?".

    The window defaults to ``[-n, n]`` (or the colouring's domain) and the
    granularity to ``1/n``. The result carries either a verified witness or a
    certificate refuting every pattern for every cut count ``0..t``.
    """
    if coloring.d != 1:
        raise InputError("certify_no_split_1d needs d = 1")
    if window is None:
        window = Box((-n,), (n,)) if n is not None else coloring.bounds
    if gamma is None:
        if n is None:
            raise InputError("give gamma or the window half-extent n")
        gamma = Fraction(1, n)
    return search_window_1d(coloring, q, t, gamma, window, certify=True, jobs=jobs)


@dataclass(frozen=True)
class ProbeBudget:
    boxes: int = 8
    search: SearchBudget = field(default_factory=SearchBudget)
    seed: int = 0


@dataclass
class ProbeReport:
    """Outcome of random probing. Not a certificate: absence of a witness proves nothing."""

    attempts: int
    witness: Splitting | None
    best_residual_trace: list[float]
    patterns: int
    starts: int
    budget: ProbeBudget

    @property
    def best_residual(self) -> float:
        return self.best_residual_trace[-1] if self.best_residual_trace else float("inf")

    def to_json(self) -> dict:
        return {
            "certificate": False,
            "found": self.witness is not None,
            "attempts": self.attempts,
            "patterns_explored": self.patterns,
            "optimizer_starts": self.starts,
            "best_residual": self.best_residual,
            "best_residual_trace": self.best_residual_trace,
            "budget": {"boxes": self.budget.boxes, "seed": self.budget.seed, "starts": self.budget.search.starts,
                       "max_nfev": self.budget.search.max_nfev},
        }


def probe_no_split_md(
    coloring: GridColoring,
    q: int,
    t,
    gamma,
    window: Box | None = None,
    budget: ProbeBudget | None = None,
    jobs: int = 1,
) -> ProbeReport:
    """Search random necklace cubes inside ``window`` for fair splittings."""
    if coloring.d < 2:
        raise InputError("probe_no_split_md needs d >= 2 (use certify_no_split_1d)")
    budget = budget or ProbeBudget()
    window = coloring.bounds if window is None else window
    if not coloring.bounds.contains(window):
        raise DomainError("window is not inside the colouring domain")
    gamma = rat(gamma)
    tmax = max(t) if isinstance(t, (tuple, list)) else t
    smin = (tmax + 1) * gamma
    smax = min(window.extents)
    if smin > smax:
        raise InputError("no cube in the window can carry that many cuts at that granularity")
    rng = np.random.default_rng(np.random.SeedSequence(budget.seed))
    trace: list[float] = []
    best = float("inf")
    patterns = starts = 0
    res_den = 1 << 16
    for attempt in range(1, budget.boxes + 1):
        side = smin + (smax - smin) * Fraction(int(rng.integers(1, res_den + 1)), res_den)
        corner = tuple(lo + (ext - side) * Fraction(int(rng.integers(0, res_den + 1)), res_den)
                       for lo, ext in zip(window.lo, window.extents))
        box = Box.cube(corner, side)
        sb = SearchBudget(budget.search.starts, budget.search.max_nfev, int(rng.integers(0, 2**63 - 1)))
        r = solve_grid_axis_cuts_md(coloring, box, q, t, gamma, sb, jobs)
        patterns += r.patterns
        starts += r.starts
        best = min(best, r.best_residual)
        trace.append(best)
        if r.witness is not None:
            return ProbeReport(attempt, r.witness, trace, patterns, starts, budget)
    return ProbeReport(budget.boxes, None, trace, patterns, starts, budget)


__all__ = [
    "AdversaryParams",
    "DofAudit",
    "EquationSystem",
    "ProbeBudget",
    "ProbeReport",
    "RankReport",
    "SplitPattern",
    "adversary_cubes",
    "adversary_sides",
    "audit_dof",
    "build_equation_system",
    "certify_no_split_1d",
    "exact_jacobian_rank",
    "generate_bad_coloring",
    "jacobian_rank_check",
    "numeric_rank",
    "probe_no_split_md",
    "white_distance",
]
