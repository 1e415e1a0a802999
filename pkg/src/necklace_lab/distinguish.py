"""Pairs of axis-parallel cubes with identical colour-measure vectors.

Equal measure vectors force equal volumes, hence equal sides, so a pair is
parametrised by two corners and one common side. In one dimension the search
is exact (run patterns of the four endpoints, each a small rational LP); in
higher dimensions it is a seeded multistart least-squares search whose
candidates are re-verified exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares

from .core import Box, GridColoring, measure_vector
from .errors import DomainError, InputError
from .exact import rat
from .lp import SystemBuilder, solve_lp
from .numeric import SNAP_DENOMINATORS, CumulativeMeasure
from .splitter1d import affine_amounts, color_runs


@dataclass(frozen=True)
class CubePair:
    a: Box
    b: Box
    measure: tuple[Fraction, ...]

    def verify(self, coloring: GridColoring, sigma: Fraction) -> bool:
        return (
            self.a.is_cube
            and self.b.is_cube
            and measure_vector(coloring, self.a) == self.measure
            and measure_vector(coloring, self.b) == self.measure
            and separated(self.a, self.b, sigma)
        )

    def swapped(self) -> "CubePair":
        return CubePair(self.b, self.a, self.measure)


def separated(a: Box, b: Box, sigma: Fraction) -> bool:
    """Does ``a \\ b`` contain a cube of side ``sigma``?

    For cubes of equal side ``s >= sigma`` this holds iff some axis has
    ``|a_i - b_i| >= sigma``: the slab of ``a`` in front of ``b`` on that axis
    is at least ``sigma`` thick, and otherwise every point of ``a`` is within
    ``sigma`` of ``b`` along each axis.
    """
    side = a.extents[0]
    if side < sigma or b.extents[0] != side:
        return False
    return any(abs(x - y) >= sigma for x, y in zip(a.lo, b.lo))


def _find_1d(coloring: GridColoring, window: Box, sigma: Fraction) -> CubePair | None:
    runs = color_runs(coloring)
    k = coloring.k
    wlo, whi = window.lo[0], window.hi[0]
    idx = [r for r, run in enumerate(runs) if run.hi >= wlo and run.lo <= whi]
    # variables: 0 a_lo, 1 a_hi, 2 b_lo, 3 b_hi; the pair is ordered so that a starts first
    for ra0 in idx:
        for rb0 in (r for r in idx if r >= ra0):
            for ra1 in (r for r in idx if r >= ra0):
                for rb1 in (r for r in idx if r >= rb0):
                    sb = SystemBuilder(4, ("a_lo", "a_hi", "b_lo", "b_hi"))
                    for v, r in zip(range(4), (ra0, ra1, rb0, rb1)):
                        sb.ge({v: 1}, max(wlo, runs[r].lo))
                        sb.le({v: 1}, min(whi, runs[r].hi))
                    sb.le({0: 1, 1: -1}, -sigma)
                    sb.le({0: 1, 2: -1}, -sigma)
                    A = affine_amounts(runs, k, 0, 1, ra0, ra1)
                    B = affine_amounts(runs, k, 2, 3, rb0, rb1)
                    for (ca, xa), (cb, xb) in zip(A, B):
                        coeffs = dict(ca)
                        for v, x in cb.items():
                            coeffs[v] = coeffs.get(v, 0) - x
                        coeffs = {v: x for v, x in coeffs.items() if x}
                        if coeffs or xa != xb:
                            sb.eq(coeffs, xb - xa)
                    res = solve_lp(sb.build())
                    if res.feasible:
                        x = res.x
                        a, b = Box((x[0],), (x[1],)), Box((x[2],), (x[3],))
                        return CubePair(a, b, measure_vector(coloring, a))
    return None


@dataclass(frozen=True)
class PairSearchBudget:
    starts: int = 64
    max_nfev: int = 300
    seed: int = 0


def _find_md(coloring: GridColoring, window: Box, sigma: Fraction, budget: PairSearchBudget) -> CubePair | None:
    d = coloring.d
    cm = CumulativeMeasure(coloring)
    lo = np.array([float(x) for x in window.lo])
    ext = np.array([float(x) for x in window.extents])
    sg = float(sigma)
    L = float(ext.min())
    if 2 * sg > L:
        return None
    rng = np.random.default_rng(np.random.SeedSequence(budget.seed))
    for axis in range(d):
        # unknowns: side s, a corner, offset w >= 0 with b_axis = a_axis + sigma + w, other b coords
        for _ in range(budget.starts):
            x0 = rng.random(2 * d + 1)

            def unpack(u):
                s = sg + u[0] * (L - 2 * sg)
                room = ext - s
                a = lo + u[1 : d + 1] * room
                b = lo + u[d + 1 :] * room
                # push b past a on the separating axis, keeping it inside the window
                b[axis] = a[axis] + sg + u[d + 1 + axis] * max(room[axis] - (a[axis] - lo[axis]) - sg, 0.0)
                return s, a, b

            def f(u):
                s, a, b = unpack(u)
                m = cm.box_measures(np.stack([a, b]), np.stack([a + s, b + s]))
                return (m[0] - m[1]) / s**d

            sol = least_squares(f, x0, bounds=(0.0, 1.0), method="trf", max_nfev=budget.max_nfev,
                                xtol=1e-15, ftol=1e-15, gtol=1e-15)
            s, a, b = unpack(sol.x)
            for D in SNAP_DENOMINATORS:
                S = Fraction(float(s)).limit_denominator(D)
                A = Box.cube([Fraction(float(v)).limit_denominator(D) for v in a], S) if S > 0 else None
                B = Box.cube([Fraction(float(v)).limit_denominator(D) for v in b], S) if S > 0 else None
                if A is None or not (window.contains(A) and window.contains(B)):
                    continue
                ma = measure_vector(coloring, A)
                if ma == measure_vector(coloring, B) and separated(A, B, sigma):
                    return CubePair(A, B, ma)
    return None


def find_equal_cubes(
    coloring: GridColoring,
    window: Box | None = None,
    sigma=None,
    n: int | None = None,
    budget: PairSearchBudget | None = None,
) -> CubePair | None:
    """Two cubes in ``window`` with the same measure of every colour, ``a \\ b`` holding a ``sigma``-cube.

    ``sigma`` defaults to ``1/n``. In one dimension None means no such pair
    exists (the search is exhaustive); otherwise it only means none was found.
    """
    window = coloring.bounds if window is None else window
    if not coloring.bounds.contains(window):
        raise DomainError("window is not inside the colouring domain")
    if sigma is None:
        if n is None:
            raise InputError("give sigma or n")
        sigma = Fraction(1, n)
    sigma = rat(sigma)
    if sigma <= 0:
        raise InputError("separation must be positive")
    if coloring.d == 1:
        pair = _find_1d(coloring, window, sigma)
    else:
        pair = _find_md(coloring, window, sigma, budget or PairSearchBudget())
    if pair is not None and not pair.verify(coloring, sigma):  # pragma: no cover - internal guard
        raise ArithmeticError("cube pair failed exact verification")
    return pair


@dataclass(frozen=True)
class DistinguishAudit:
    d: int
    k: int
    shape: str
    threshold: int
    guaranteed: bool  # a dense set of distinguishing k-colourings is known to exist
    conjectured_impossible: bool  # cubes with k <= 2d + 2
    unknowns: int
    equations: int


def audit_distinguish(d: int, k: int, shape: str = "cube") -> DistinguishAudit:
    if d < 1 or k < 1:
        raise InputError("need d, k >= 1")
    if shape == "cube":
        threshold, unknowns = 2 * d + 3, 2 * (d + 1)
    elif shape == "cuboid":
        threshold, unknowns = 4 * d + 1, 4 * d
    else:
        raise InputError("shape must be 'cube' or 'cuboid'")
    return DistinguishAudit(
        d, k, shape, threshold, k >= threshold, shape == "cube" and k <= 2 * d + 2, unknowns, k
    )


__all__ = ["CubePair", "DistinguishAudit", "PairSearchBudget", "audit_distinguish", "find_equal_cubes", "separated"]
