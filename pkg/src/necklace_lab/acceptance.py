"""Desk-scale acceptance experiments.

Each ``criterion_N`` returns a :class:`CriterionResult` whose ``records`` form
a JSONL log (one record per trial or group of trials, no timings) so that a
rerun with the same seed can be compared byte for byte.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .adversary import (
    AdversaryParams,
    SplitPattern,
    audit_dof,
    build_equation_system,
    certify_no_split_1d,
    generate_bad_coloring,
    jacobian_rank_check,
)
from .core import Box, DiscreteNecklace, GridColoring, is_fair, part_counts
from .discrete_bounds import count_splittable_subsets, counting_bound_report, find_hard_subset
from .distinguish import find_equal_cubes
from .exact import fmt_rat
from .labeling import restricted_growth
from .multidim import min_cuts_cells, min_cuts_discrete_md, split_via_lift
from .polytope import Hyperplane, Polytope, arrangement_cells, polytope_volume
from .splitter1d import min_cuts_discrete_1d, solve_discrete_1d


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    records: list[dict] = field(default_factory=list)

    def log(self) -> str:
        return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in self.records)

    def line(self) -> str:
        return f"criterion {self.number:2d} {'PASS' if self.passed else 'FAIL'}  {self.title}: {self.summary}"


def _rng(seed: int, criterion: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(criterion,)))


# ---------------------------------------------------------------- 1


def criterion_1(seed: int = 0, max_len: int = 12) -> CriterionResult:
    """Every valid necklace up to relabelling of colours splits within k(q-1) cuts."""
    records = []
    ok = True
    total = 0
    for q in (2, 3):
        for length in range(q, max_len + 1, q):
            for k in (1, 2, 3):
                checked = worst = 0
                group_ok = True
                for beads in restricted_growth(length, k):
                    if len(set(beads)) != k:
                        continue
                    counts = [beads.count(c) for c in range(1, k + 1)]
                    if any(c % q for c in counts):
                        continue
                    nk = DiscreteNecklace(np.array(beads), q, k)
                    s = solve_discrete_1d(nk)
                    good = is_fair(part_counts(nk, s)) and s.t <= k * (q - 1)
                    group_ok &= good
                    worst = max(worst, s.t)
                    checked += 1
                total += checked
                ok &= group_ok
                records.append({"q": q, "length": length, "k": k, "necklaces": checked,
                                "max_cuts": worst, "bound": k * (q - 1), "ok": group_ok})
    return CriterionResult(1, "k(q-1) cut bound, exhaustive 1-D", ok, f"{total} necklaces (colour classes up to relabelling)", records)


# ---------------------------------------------------------------- 2


def criterion_2(seed: int = 0) -> CriterionResult:
    records = []
    ok = True
    for k in range(1, 5):
        beads = np.repeat(np.arange(1, k + 1), 2)
        nk = DiscreteNecklace(beads, 2, k)
        m = min_cuts_discrete_1d(nk)
        oracle = min_cuts_cells(beads, k, 2, k)  # independent exhaustive route
        good = m.t_min == k and oracle is not None and oracle[0] == k
        ok &= good
        records.append({"k": k, "necklace": nk.to_string(), "t_min": m.t_min,
                        "oracle": None if oracle is None else oracle[0], "ok": good})
    return CriterionResult(2, "k pairs need exactly k cuts", ok, "k = 1..4", records)


# ---------------------------------------------------------------- 3


def _shapes(d: int, max_cells: int = 16) -> list[tuple[int, ...]]:
    return [s for s in itertools.product(range(2, max_cells + 1), repeat=d)
            if math.prod(s) <= max_cells and math.prod(s) % 2 == 0]


def random_discrete(rng: np.random.Generator, d: int, k: int, q: int = 2) -> DiscreteNecklace:
    shapes = [s for s in _shapes(d) if math.prod(s) % q == 0]
    shape = shapes[int(rng.integers(len(shapes)))]
    n = math.prod(shape)
    beads = np.repeat(rng.integers(1, k + 1, size=n // q), q)
    return DiscreteNecklace(rng.permutation(beads).reshape(shape), q, k)


def criterion_3(seed: int = 0, trials: int = 200) -> CriterionResult:
    rng = _rng(seed, 3)
    records = []
    ok = True
    for i in range(trials):
        d = int(rng.integers(2, 4))
        k = int(rng.integers(1, 4))
        nk = random_discrete(rng, d, k)
        s = split_via_lift(nk)
        bound = (2 * d - 1) * k
        fair = is_fair(part_counts(nk, s))
        m = min_cuts_discrete_md(nk, t_cap=s.t)
        good = fair and s.t <= bound and m.found and m.t_min <= s.t
        ok &= good
        records.append({"trial": i, "sides": list(nk.sides), "k": k, "lift_cuts": s.t, "bound": bound,
                        "min_cuts": m.t_min, "ok": good})
    return CriterionResult(3, "lift-split sandwich", ok, f"{trials} random necklaces", records)


# ---------------------------------------------------------------- 4


def criterion_4(seed: int = 0, seeds: int = 20) -> CriterionResult:
    records = []
    ok = True
    for s in range(seed, seed + seeds):
        p = AdversaryParams(d=1, k=4, q=2, t=1, n=1, seed=s)
        res = certify_no_split_1d(generate_bad_coloring(p), q=2, t=1, gamma=1, n=1)
        cert = res.certificate
        good = res.witness is None and cert is not None and cert.verify()
        ok &= good
        records.append({"part": "k=4", "seed": s, "certified": good,
                        "refutations": None if cert is None else len(cert.refutations),
                        "patterns_refuted": res.patterns, "prefixes_pruned": res.prefixes_pruned})
    gap = {"witness": 0, "certificate": 0}
    for s in range(seed, seed + seeds):
        p = AdversaryParams(d=1, k=3, q=2, t=1, n=1, seed=s)
        res = certify_no_split_1d(generate_bad_coloring(p), q=2, t=1, gamma=1, n=1)
        found = res.witness is not None
        gap["witness" if found else "certificate"] += 1
        rec = {"part": "k=3", "seed": s, "outcome": "witness" if found else "certificate"}
        if found:
            rec["cuts"] = [fmt_rat(c.coordinate) for c in res.witness.cuts]
            rec["box"] = [fmt_rat(res.witness.box.lo[0]), fmt_rat(res.witness.box.hi[0])]
        records.append(rec)
    summary = f"{seeds} seeds certified (k=4); k=3 probe: {gap['witness']} witnesses, {gap['certificate']} certificates"
    return CriterionResult(4, "adversarial colourings certified", ok, summary, records)


# ---------------------------------------------------------------- 5

INEQUALITIES: dict[str, Callable[[int, int, int, int], bool]] = {
    "axis-window": lambda d, k, q, t: k * (q - 1) > t + d + q - 1,
    "axis-window-d1": lambda d, k, q, t: k * (q - 1) > t + 2,
    "axis-fixed": lambda d, k, q, t: k * (q - 1) > t + q - 2,
    "arbitrary-window": lambda d, k, q, t: k * (q - 1) > d * t + d + q - 1,
    "arbitrary-fixed": lambda d, k, q, t: k * (q - 1) > d * t + q - 2,
}


def dof_grid() -> list[tuple[int, int, int, int]]:
    return list(itertools.product(range(1, 5), range(2, 7), (2, 3), range(1, 6)))


def criterion_5(seed: int = 0) -> CriterionResult:
    records = []
    ok = True
    grid = dof_grid()
    for d, k, q, t in grid:
        audits = {
            "axis-window": audit_dof(d, k, q, t, "axis", "window"),
            "axis-fixed": audit_dof(d, k, q, t, "axis", "fixed"),
            "arbitrary-window": audit_dof(d, k, q, t, "arbitrary", "window"),
            "arbitrary-fixed": audit_dof(d, k, q, t, "arbitrary", "fixed"),
        }
        expect = {name: f(d, k, q, t) for name, f in INEQUALITIES.items()}
        good = (
            audits["axis-fixed"].verdict == expect["axis-fixed"]
            and audits["arbitrary-window"].verdict == expect["arbitrary-window"]
            and audits["arbitrary-fixed"].verdict == expect["arbitrary-fixed"]
        )
        if d == 1:
            # the sharper one-dimensional inequality; the general one must imply it
            good &= audits["axis-window"].verdict == expect["axis-window-d1"]
            good &= (not expect["axis-window"]) or expect["axis-window-d1"]
        else:
            good &= audits["axis-window"].verdict == expect["axis-window"]
        ok &= good
        records.append({"d": d, "k": k, "q": q, "t": t, "ok": good,
                        **{name: a.verdict for name, a in audits.items()}})
    return CriterionResult(5, "degrees-of-freedom thresholds", ok, f"{len(grid)} tuples x 5 inequalities", records)


# ---------------------------------------------------------------- 6


def criterion_6(seed: int = 0, trials: int = 100) -> CriterionResult:
    records = []
    square = GridColoring.uniform(Box((0, 0), (1, 1)))
    es = build_equation_system(square, SplitPattern((0, 1), (1, 2, 3, 4)), 4, colors=False)
    rep = jacobian_rank_check(es, trials=trials, seed=seed)
    ok = rep.trials == trials and set(rep.ranks) == {2}
    records.append({"d": 2, "q": 4, "trials": rep.trials, "attempts": rep.attempts,
                    "ranks": sorted(set(rep.ranks)), "max_rank": rep.max_rank, "equations": rep.n_equations})
    unit = GridColoring.uniform(Box((0,), (1,)))
    for q in range(2, 6):
        es1 = build_equation_system(unit, SplitPattern((0,) * (q - 1), tuple(range(1, q + 1))), q, colors=False)
        r1 = jacobian_rank_check(es1, trials=10, seed=seed)
        good = r1.trials == 10 and set(r1.ranks) == {q - 1}
        ok &= good
        records.append({"d": 1, "q": q, "trials": r1.trials, "ranks": sorted(set(r1.ranks)),
                        "max_rank": r1.max_rank, "equations": r1.n_equations})
    return CriterionResult(6, "volume-system rank degeneracy", ok,
                           f"d=2,q=4 ranks {sorted(set(rep.ranks))} over {rep.trials} points; d=1 full rank", records)


# ---------------------------------------------------------------- 7


def _random_hyperplane(rng: np.random.Generator, d: int) -> Hyperplane:
    while True:
        normal = [Fraction(int(x), int(y)) for x, y in zip(rng.integers(-4, 5, d), rng.integers(1, 5, d))]
        if any(normal):
            break
    point = [Fraction(int(x), 8) for x in rng.integers(1, 8, d)]
    return Hyperplane(tuple(normal), sum((a * b for a, b in zip(normal, point)), Fraction(0)))


def criterion_7(seed: int = 0, trials: int = 100) -> CriterionResult:
    rng = _rng(seed, 7)
    records = []
    ok = True
    for d in range(1, 6):
        hs = [(tuple(Fraction(-int(i == j)) for j in range(d)), Fraction(0)) for i in range(d)]
        hs.append((tuple(Fraction(1) for _ in range(d)), Fraction(1)))
        vol = polytope_volume(Polytope.from_halfspaces(hs, d))
        good = vol == Fraction(1, math.factorial(d))
        ok &= good
        records.append({"part": "simplex", "d": d, "volume": fmt_rat(vol), "ok": good})
    for i in range(trials):
        d = int(rng.integers(1, 4))
        t = int(rng.integers(1, 4))
        box = Box((0,) * d, (1,) * d)
        hyps = [_random_hyperplane(rng, d) for _ in range(t)]
        cells = arrangement_cells(box, hyps)
        total = sum((polytope_volume(c) for _, c in cells), Fraction(0))
        good = total == box.volume
        ok &= good
        records.append({"part": "arrangement", "trial": i, "d": d, "t": t, "cells": len(cells), "ok": good})
    return CriterionResult(7, "exact polytope volumes", ok, f"simplices d<=5, {trials} arrangements", records)


# ---------------------------------------------------------------- 8


def random_interval_coloring(rng: np.random.Generator, max_den: int = 16, k: int = 2) -> GridColoring:
    pool = sorted({Fraction(a, b) for b in range(1, max_den + 1) for a in range(1, b)})
    m = int(rng.integers(1, 8))
    inner = sorted(pool[int(i)] for i in rng.choice(len(pool), size=m, replace=False))
    bps = [Fraction(0), *inner, Fraction(1)]
    return GridColoring.intervals(bps, [int(c) for c in rng.integers(1, k + 1, size=len(bps) - 1)], k)


def criterion_8(seed: int = 0, trials: int = 50) -> CriterionResult:
    rng = _rng(seed, 8)
    sigma = Fraction(1, 8)
    records = []
    ok = True
    for i in range(trials):
        g = random_interval_coloring(rng)
        pair = find_equal_cubes(g, sigma=sigma)
        good = pair is not None and pair.verify(g, sigma)
        ok &= good
        rec = {"trial": i, "breakpoints": [fmt_rat(b) for b in g.breakpoints[0]],
               "colors": [int(c) for c in g.colors], "ok": good}
        if pair is not None:
            rec["a"] = [fmt_rat(pair.a.lo[0]), fmt_rat(pair.a.hi[0])]
            rec["b"] = [fmt_rat(pair.b.lo[0]), fmt_rat(pair.b.hi[0])]
        records.append(rec)
    return CriterionResult(8, "equal-measure interval pairs", ok, f"{trials} random 2-colourings, sigma = 1/8", records)


# ---------------------------------------------------------------- 9

COUNT_TUPLES = [(2, 1, 2, 1), (3, 1, 2, 1), (4, 1, 2, 1), (4, 1, 2, 2), (6, 1, 3, 2), (2, 2, 2, 1),
                (3, 2, 2, 1), (3, 2, 2, 2), (3, 2, 3, 2), (4, 2, 2, 1), (4, 2, 2, 2), (2, 3, 2, 1)]


def criterion_9(seed: int = 0) -> CriterionResult:
    records = []
    main = count_splittable_subsets(3, 2, 2, 1)
    ok = main.splittable < main.divisible
    for n, d, q, t in COUNT_TUPLES:
        c = count_splittable_subsets(n, d, q, t)
        b = counting_bound_report(n, d, q, t)
        good = b.estimate >= c.splittable
        ok &= good
        records.append({"n": n, "d": d, "q": q, "t": t, "splittable": c.splittable, "divisible": c.divisible,
                        "total": c.total, "estimate": str(b.estimate), "ok": good})
    hard = find_hard_subset(3, 2, 2)
    ok &= hard is not None and hard.min_cuts >= hard.target
    records.append({"hard_subset": None if hard is None else sorted(list(c) for c in hard.cells),
                    "min_cuts": None if hard is None else hard.min_cuts})
    summary = f"n=3,d=2,q=2,t=1: {main.splittable} splittable < {main.divisible} even subsets"
    return CriterionResult(9, "counting lower bound", ok, summary, records)


# ---------------------------------------------------------------- 10

CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def criterion_10(seed: int = 0, first: dict[int, CriterionResult] | None = None,
                 numbers=tuple(CRITERIA)) -> CriterionResult:
    """Rerun criteria and compare logs byte for byte (``first`` reuses earlier runs)."""
    records = []
    ok = True
    for n in numbers:
        a = first[n].log() if first and n in first else CRITERIA[n](seed).log()
        b = CRITERIA[n](seed).log()
        same = a.encode() == b.encode()
        ok &= same
        records.append({"criterion": n, "bytes": len(a.encode()), "identical": same})
    return CriterionResult(10, "determinism", ok, f"criteria {list(numbers)} rerun byte-identically", records)


def run_all(seed: int = 0, numbers=tuple(range(1, 11))) -> list[CriterionResult]:
    out: dict[int, CriterionResult] = {}
    for n in numbers:
        if n == 10:
            out[10] = criterion_10(seed, out, tuple(x for x in numbers if x != 10) or tuple(CRITERIA))
        else:
            out[n] = CRITERIA[n](seed)
    return [out[n] for n in numbers]


__all__ = ["CRITERIA", "CriterionResult", "run_all"] + [f"criterion_{i}" for i in range(1, 11)]
