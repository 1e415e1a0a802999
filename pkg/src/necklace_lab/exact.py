"""Exact rational scalars and small dense linear algebra over them.

Every geometric quantity in the package is a :class:`fractions.Fraction`.
Matrices are plain lists of lists; the sizes involved (a few dozen rows at
most) do not justify anything heavier.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction

Matrix = list[list[Fraction]]


def rat(value) -> Fraction:
    """Coerce ints, Fractions, and ``"p/q"`` / ``"p"`` strings to a Fraction.

    Floats are rejected: an exact package must not silently absorb binary
    rounding. Use ``Fraction(x)`` explicitly if that is really intended.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def fmt_rat(value: Fraction) -> str:
    """Serialise as ``"p/q"`` (always with a slash, ``q > 0``)."""
    value = rat(value)
    return f"{value.numerator}/{value.denominator}"


def rat_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(rat(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None, track: bool = False):
    """Reduced row echelon form.

    Returns ``(R, pivots, E)`` where ``E @ rows == R`` when ``track`` is set
    (``E`` is ``None`` otherwise) and ``pivots`` lists the pivot column of
    each nonzero row of ``R``. Only the first ``ncols`` columns are used for
    pivoting, so an augmented column can ride along.
    """
    R = [[Fraction(x) for x in row] for row in rows]
    m = len(R)
    width = len(R[0]) if m else 0
    if ncols is None:
        ncols = width
    E = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)] if track else None
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            R[r], R[p] = R[p], R[r]
            if track:
                E[r], E[p] = E[p], E[r]
        inv = 1 / R[r][c]
        if inv != 1:
            R[r] = [x * inv for x in R[r]]
            if track:
                E[r] = [x * inv for x in E[r]]
        for i in range(m):
            f = R[i][c]
            if i != r and f != 0:
                Ri, Rr = R[i], R[r]
                R[i] = [a - f * b for a, b in zip(Ri, Rr)]
                if track:
                    E[i] = [a - f * b for a, b in zip(E[i], E[r])]
        pivots.append(c)
        r += 1
    return R, pivots, E


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in rows]
    n = len(A)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        result *= piv
        for i in range(c + 1, n):
            f = A[i][c] / piv
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return sign * result


def solve_square(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or ``None`` if singular."""
    n = len(A)
    R, pivots, _ = rref([list(row) + [bi] for row, bi in zip(A, b)], ncols=n)
    if len(pivots) < n:
        return None
    return [R[i][n] for i in range(n)]


def affine_dimension(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull; -1 for the empty set."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0
