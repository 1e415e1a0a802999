"""Assigning pieces to parts.

Parts are interchangeable, so labelings are enumerated as restricted growth
strings (the first piece gets label 1, a new label is always the smallest
unused one). Every labeling is a relabelling of exactly one such string and
fairness is invariant under relabelling, so nothing is lost.
"""
from __future__ import annotations

from typing import Iterator, Sequence


def restricted_growth(n: int, q: int) -> Iterator[tuple[int, ...]]:
    """All length-``n`` labelings with labels ``1..q`` in first-use order, lexicographically."""
    if n == 0:
        yield ()
        return
    labels = [1] * n

    def rec(i: int, used: int):
        if i == n:
            yield tuple(labels)
            return
        for lab in range(1, min(used + 1, q) + 1):
            labels[i] = lab
            yield from rec(i + 1, max(used, lab))

    labels[0] = 1
    yield from rec(1, 1)


def fair_labeling(pieces: Sequence[Sequence[int]], q: int) -> tuple[int, ...] | None:
    """Lexicographically least restricted-growth labeling making all parts equal.

    ``pieces`` are integer count vectors. Branch and bound: a part whose
    running count exceeds ``total / q`` in any colour is abandoned, and failed
    (position, multiset-of-parts) states are memoised.
    """
    n = len(pieces)
    if n == 0:
        return ()
    k = len(pieces[0])
    total = [sum(p[j] for p in pieces) for j in range(k)]
    if any(x % q for x in total):
        return None
    target = tuple(x // q for x in total)
    zero = tuple([0] * k)
    parts = [zero] * q
    labels = [0] * n
    failed: set = set()

    def rec(i: int, used: int) -> bool:
        if i == n:
            return True  # every part <= target and the sum is q*target
        key = (i, tuple(sorted(parts)))
        if key in failed:
            return False
        piece = pieces[i]
        for lab in range(min(used + 1, q)):
            cur = parts[lab]
            new = tuple(a + b for a, b in zip(cur, piece))
            if any(a > b for a, b in zip(new, target)):
                continue
            parts[lab] = new
            labels[i] = lab + 1
            if rec(i + 1, max(used, lab + 1)):
                return True
            parts[lab] = cur
        failed.add(key)
        return False

    return tuple(labels) if rec(0, 0) else None
