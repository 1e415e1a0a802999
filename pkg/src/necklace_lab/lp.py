"""Exact rational linear programming with Farkas infeasibility certificates.

Systems have the form ``A_ub x <= b_ub, A_eq x = b_eq`` with all variables
free (bounds are ordinary rows). Equalities are eliminated exactly first, so
the simplex only ever sees a small inequality system in the null-space
coordinates. When the system is infeasible a Farkas vector ``z`` is returned
with ``z_ub >= 0``, ``z_ub A_ub + z_eq A_eq = 0`` and ``z_ub b_ub + z_eq b_eq < 0``;
:func:`verify_farkas` checks such a vector without trusting the solver.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import dot, fmt_rat, rref

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LinearSystem:
    nvars: int
    A_ub: tuple[tuple[Fraction, ...], ...] = ()
    b_ub: tuple[Fraction, ...] = ()
    A_eq: tuple[tuple[Fraction, ...], ...] = ()
    b_eq: tuple[Fraction, ...] = ()
    names: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "names": list(self.names),
            "A_ub": [[fmt_rat(x) for x in row] for row in self.A_ub],
            "b_ub": [fmt_rat(x) for x in self.b_ub],
            "A_eq": [[fmt_rat(x) for x in row] for row in self.A_eq],
            "b_eq": [fmt_rat(x) for x in self.b_eq],
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        return all(dot(r, x) <= b for r, b in zip(self.A_ub, self.b_ub)) and all(
            dot(r, x) == b for r, b in zip(self.A_eq, self.b_eq)
        )


class SystemBuilder:
    """Accumulates rows given as ``{var_index: coeff}`` maps."""

    def __init__(self, nvars: int, names: Sequence[str] = ()):
        self.nvars = nvars
        self.names = tuple(names)
        self.A_ub: list[tuple[Fraction, ...]] = []
        self.b_ub: list[Fraction] = []
        self.A_eq: list[tuple[Fraction, ...]] = []
        self.b_eq: list[Fraction] = []

    def _row(self, coeffs: Mapping[int, Fraction]) -> tuple[Fraction, ...]:
        row = [ZERO] * self.nvars
        for i, c in coeffs.items():
            row[i] += Fraction(c)
        return tuple(row)

    def le(self, coeffs: Mapping[int, Fraction], rhs) -> None:
        self.A_ub.append(self._row(coeffs))
        self.b_ub.append(Fraction(rhs))

    def ge(self, coeffs: Mapping[int, Fraction], rhs) -> None:
        self.le({i: -Fraction(c) for i, c in coeffs.items()}, -Fraction(rhs))

    def eq(self, coeffs: Mapping[int, Fraction], rhs) -> None:
        self.A_eq.append(self._row(coeffs))
        self.b_eq.append(Fraction(rhs))

    def build(self) -> LinearSystem:
        return LinearSystem(
            self.nvars, tuple(self.A_ub), tuple(self.b_ub), tuple(self.A_eq), tuple(self.b_eq), self.names
        )


@dataclass(frozen=True)
class Farkas:
    z_ub: tuple[Fraction, ...]
    z_eq: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"z_ub": [fmt_rat(x) for x in self.z_ub], "z_eq": [fmt_rat(x) for x in self.z_eq]}


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    farkas: Farkas | None = None
    pivots: int = field(default=0, compare=False)

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def verify_farkas(system: LinearSystem, cert: Farkas) -> bool:
    """Independent check that ``cert`` proves ``system`` infeasible."""
    if len(cert.z_ub) != len(system.A_ub) or len(cert.z_eq) != len(system.A_eq):
        return False
    if any(z < 0 for z in cert.z_ub):
        return False
    for j in range(system.nvars):
        s = sum((z * row[j] for z, row in zip(cert.z_ub, system.A_ub)), ZERO)
        s += sum((z * row[j] for z, row in zip(cert.z_eq, system.A_eq)), ZERO)
        if s != 0:
            return False
    return dot(cert.z_ub, system.b_ub) + dot(cert.z_eq, system.b_eq) < 0


class _Tableau:
    """Dense tableau; last column of each row is the right-hand side."""

    def __init__(self, rows, basis, ncols):
        self.T = rows
        self.basis = basis
        self.ncols = ncols
        self.obj: list[Fraction] = [ZERO] * (ncols + 1)
        self.pivots = 0

    def pivot(self, p: int, e: int) -> None:
        T = self.T
        row = T[p]
        piv = row[e]
        if piv != 1:
            row = [x / piv for x in row]
            T[p] = row
        for i, Ti in enumerate(T):
            f = Ti[e]
            if i != p and f != 0:
                T[i] = [a - f * b for a, b in zip(Ti, row)]
        f = self.obj[e]
        if f != 0:
            # objective value lives in obj[-1] with the opposite sign convention
            self.obj = [a - f * b for a, b in zip(self.obj, row)]
        self.basis[p] = e
        self.pivots += 1

    def run(self, allowed: Sequence[bool]) -> str:
        """Maximise; Bland's rule. ``obj[j] > 0`` marks an improving column."""
        while True:
            e = next((j for j in range(self.ncols) if allowed[j] and self.obj[j] > 0), None)
            if e is None:
                return "optimal"
            best = None
            for i, Ti in enumerate(self.T):
                a = Ti[e]
                if a > 0:
                    ratio = Ti[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], e)

    def value(self) -> Fraction:
        # obj row stores -(objective value) in its rhs slot
        return -self.obj[-1]


def _simplex_free(M: list[list[Fraction]], h: list[Fraction], c: list[Fraction] | None):
    """max c.y s.t. M y <= h with y free. Returns (status, y, value, z, pivots)."""
    m = len(M)
    r = len(c) if c is not None else (len(M[0]) if m else 0)
    signs = [1 if hi >= 0 else -1 for hi in h]
    arts = [i for i in range(m) if signs[i] < 0]
    ncols = 2 * r + m + len(arts)
    art_col = {i: 2 * r + m + a for a, i in enumerate(arts)}
    rows, basis = [], []
    for i in range(m):
        s = signs[i]
        row = [s * x for x in M[i]] + [-s * x for x in M[i]]
        row += [Fraction(s) if k == i else ZERO for k in range(m)]
        row += [ONE if art_col.get(i) == 2 * r + m + a else ZERO for a in range(len(arts))]
        row.append(s * h[i])
        rows.append(row)
        basis.append(2 * r + i if s > 0 else art_col[i])
    tab = _Tableau(rows, basis, ncols)
    is_art = [False] * (2 * r + m) + [True] * len(arts)

    if arts:
        # phase 1: maximise -sum(artificials); rhs slot of obj holds -value
        obj = [ZERO] * (ncols + 1)
        for i in arts:
            Ti = rows[i]
            for j in range(ncols + 1):
                if j == ncols or not is_art[j]:
                    obj[j] += Ti[j]
        tab.obj = obj
        tab.run([True] * ncols)
        if tab.value() < 0:
            z = [-tab.obj[2 * r + i] for i in range(m)]
            return "infeasible", None, None, z, tab.pivots
        # drive remaining artificials out of the basis
        i = 0
        while i < len(tab.T):
            if is_art[tab.basis[i]]:
                e = next((j for j in range(2 * r + m) if tab.T[i][j] != 0), None)
                if e is None:
                    del tab.T[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, e)
            i += 1

    allowed = [not a for a in is_art]
    if c is None:
        tab.obj = [ZERO] * (ncols + 1)
        status = "optimal"
    else:
        C = list(c) + [-x for x in c] + [ZERO] * (m + len(arts))
        obj = C + [ZERO]
        for i, b in enumerate(tab.basis):
            cb = C[b]
            if cb != 0:
                obj = [a - cb * t for a, t in zip(obj, tab.T[i])]
        tab.obj = obj
        status = tab.run(allowed)
    xs = [ZERO] * ncols
    for i, b in enumerate(tab.basis):
        xs[b] = tab.T[i][-1]
    y = [xs[j] - xs[r + j] for j in range(r)]
    if status == "unbounded":
        return "unbounded", y, None, None, tab.pivots
    value = dot(c, y) if c is not None else ZERO
    return "optimal", y, value, None, tab.pivots


def solve_lp(system: LinearSystem, c: Sequence | None = None, maximize: bool = True) -> LPResult:
    """Optimise ``c.x`` (or just find a feasible point when ``c`` is None)."""
    n = system.nvars
    cvec = None if c is None else [Fraction(v) if maximize else -Fraction(v) for v in c]

    # eliminate equalities: x = x0 + N y
    if system.A_eq:
        aug = [list(row) + [b] for row, b in zip(system.A_eq, system.b_eq)]
        R, piv, E = rref(aug, ncols=n, track=True)
        for i in range(len(piv), len(R)):
            if R[i][n] != 0:
                s = -1 if R[i][n] > 0 else 1
                z_eq = tuple(s * v for v in E[i])
                cert = Farkas(tuple([ZERO] * len(system.A_ub)), z_eq)
                return LPResult("infeasible", farkas=cert)
        free = [j for j in range(n) if j not in piv]
        x0 = [ZERO] * n
        for k, pc in enumerate(piv):
            x0[pc] = R[k][n]
        N = []
        for f in free:
            v = [ZERO] * n
            v[f] = ONE
            for k, pc in enumerate(piv):
                v[pc] = -R[k][f]
            N.append(v)
    else:
        R, piv, E = [], [], []
        free = list(range(n))
        x0 = [ZERO] * n
        N = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]

    M = [[dot(row, v) for v in N] for row in system.A_ub]
    h = [b - dot(row, x0) for row, b in zip(system.A_ub, system.b_ub)]
    cr = None if cvec is None else [dot(cvec, v) for v in N]

    if not N:
        bad = next((i for i, hi in enumerate(h) if hi < 0), None)
        if bad is None:
            value = None if cvec is None else dot(cvec, x0)
            return LPResult("optimal", tuple(x0), _sign(value, maximize))
        z_ub = [ZERO] * len(h)
        z_ub[bad] = ONE
        return LPResult("infeasible", farkas=_lift_farkas(system, z_ub, piv, E))

    status, y, value, z_ub, npiv = _simplex_free(M, h, cr)
    if status == "infeasible":
        return LPResult("infeasible", farkas=_lift_farkas(system, z_ub, piv, E), pivots=npiv)
    x = tuple(x0[i] + sum((y[k] * N[k][i] for k in range(len(N))), ZERO) for i in range(n))
    if status == "unbounded":
        return LPResult("unbounded", x, pivots=npiv)
    if cvec is not None:
        value = dot(cvec, x)
    return LPResult("optimal", x, _sign(value, maximize), pivots=npiv)


def _sign(value, maximize):
    if value is None:
        return None
    return value if maximize else -value


def _lift_farkas(system: LinearSystem, z_ub, piv, E) -> Farkas:
    n = system.nvars
    g = [sum((z * row[j] for z, row in zip(z_ub, system.A_ub)), ZERO) for j in range(n)]
    z_eq = [ZERO] * len(system.A_eq)
    for k, pc in enumerate(piv):
        coef = g[pc]
        if coef != 0:
            z_eq = [a - coef * b for a, b in zip(z_eq, E[k])]
    cert = Farkas(tuple(z_ub), tuple(z_eq))
    if not verify_farkas(system, cert):  # pragma: no cover - solver bug guard
        raise ArithmeticError("internal error: Farkas certificate failed verification")
    return cert


def feasible(system: LinearSystem) -> LPResult:
    return solve_lp(system, None)
