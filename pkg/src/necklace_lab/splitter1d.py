"""Fair splitting of one-dimensional necklaces.

Discrete necklaces are solved by a memoised search over cut positions whose
state is the multiset of colour-count vectors collected by the parts so far.

Piecewise-constant colourings are solved exactly. A *pattern* assigns each of
the ordered points ``P_0 <= P_1 <= ... <= P_{m+1}`` (left end, ``m`` cuts,
right end) to a monochromatic run of the colouring; inside a pattern every
colour amount of every piece is affine in the points, so fairness plus the
granularity gaps is a linear feasibility problem, solved exactly. Refuted
patterns (and pattern prefixes pruned by interval reasoning) are recorded
with a Farkas vector, which makes a negative answer a checkable certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    AxisCut,
    Box,
    DiscreteNecklace,
    GridColoring,
    Splitting,
    discrete_splitting,
    granularity_axis,
    is_fair,
    part_counts,
    part_measures,
)
from .errors import DomainError, InputError
from .exact import fmt_rat, rat
from .labeling import fair_labeling, restricted_growth
from .lp import Farkas, LinearSystem, SystemBuilder, solve_lp, verify_farkas
from .parallel import ordered_map

# ---------------------------------------------------------------- discrete


@dataclass(frozen=True)
class MinCuts:
    """Outcome of an exhaustive minimum-cut search (``t_min is None``: nothing up to ``t_cap``)."""

    t_min: int | None
    witness: Splitting | None
    t_cap: int

    @property
    def found(self) -> bool:
        return self.t_min is not None


def _require_divisible(counts: Sequence[int], q: int) -> None:
    bad = [j for j, c in enumerate(counts, start=1) if c % q]
    if bad:
        raise InputError(f"colour classes {bad} have size not divisible by q={q}")


class _Discrete1D:
    """Cut search for one colour sequence; ``cells`` holds colours ``1..k`` (0 = ignored)."""

    def __init__(self, cells: Sequence[int], k: int, q: int):
        self.L = len(cells)
        self.k = k
        self.q = q
        pre = [(0,) * k]
        for c in cells:
            row = list(pre[-1])
            if c:
                row[c - 1] += 1
            pre.append(tuple(row))
        self.pre = pre
        self.target = tuple(x // q for x in pre[-1])
        self.init = ((0,) * k,) * q
        self.memo: dict = {}

    def piece(self, a: int, b: int) -> tuple[int, ...]:
        return tuple(y - x for x, y in zip(self.pre[a], self.pre[b]))

    def _successors(self, state, piece):
        target = self.target
        seen = set()
        for i, part in enumerate(state):
            if part in seen:
                continue
            seen.add(part)
            new = tuple(a + b for a, b in zip(part, piece))
            if all(a <= b for a, b in zip(new, target)):
                yield tuple(sorted(state[:i] + (new,) + state[i + 1 :]))

    def feasible(self, pos: int, c: int, state) -> bool:
        """Can the beads from ``pos`` on be finished with exactly ``c`` more cuts?"""
        key = (pos, c, state)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if c == 0:
            piece = self.piece(pos, self.L)
            res = any(all(p == self.target for p in s) for s in self._successors(state, piece))
        else:
            res = False
            for e in range(pos + 1, self.L - c + 1):
                piece = self.piece(pos, e)
                if any(a > b for a, b in zip(piece, self.target)):
                    break
                if any(self.feasible(e, c - 1, s) for s in self._successors(state, piece)):
                    res = True
                    break
        self.memo[key] = res
        return res

    def least_cuts(self, t: int) -> tuple[int, ...] | None:
        """Lexicographically least set of ``t`` cut positions admitting a fair labeling."""
        if t > self.L - 1 or not self.feasible(0, t, self.init):
            return None
        states = {self.init}
        pos = 0
        cuts = []
        for c in range(t, 0, -1):
            for e in range(pos + 1, self.L - c + 1):
                piece = self.piece(pos, e)
                nxt = {s for st in states for s in self._successors(st, piece) if self.feasible(e, c - 1, s)}
                if nxt:
                    cuts.append(e)
                    pos, states = e, nxt
                    break
        return tuple(cuts)

    def labeling(self, cuts: Sequence[int]) -> tuple[int, ...] | None:
        bounds = (0,) + tuple(cuts) + (self.L,)
        return fair_labeling([self.piece(a, b) for a, b in zip(bounds, bounds[1:])], self.q)


def min_cuts_discrete_1d(necklace: DiscreteNecklace, q: int | None = None, t_cap: int | None = None) -> MinCuts:
    """Smallest number of cuts of a fair ``q``-splitting, searching ``t = 0..t_cap``.

    The witness uses the lexicographically least cut set for that ``t`` and the
    least labeling for those cuts. ``t_cap`` defaults to ``k(q-1)`` with ``k``
    the number of colours present.
    """
    if necklace.d != 1:
        raise InputError("min_cuts_discrete_1d needs a one-dimensional necklace")
    q = necklace.q if q is None else q
    if q < 1:
        raise InputError("q must be positive")
    counts = necklace.color_counts()
    _require_divisible(counts, q)
    k_present = sum(1 for c in counts if c)
    if t_cap is None:
        t_cap = k_present * (q - 1)
    if t_cap < 0:
        raise InputError("t_cap must be non-negative")
    search = _Discrete1D([int(c) for c in necklace.cells], necklace.k, q)
    for t in range(min(t_cap, search.L - 1) + 1):
        cuts = search.least_cuts(t)
        if cuts is None:
            continue
        labels = search.labeling(cuts)
        witness = discrete_splitting(necklace, [cuts], labels, q)
        if not is_fair(part_counts(necklace, witness)):  # pragma: no cover - internal guard
            raise ArithmeticError("discrete search produced an unfair splitting")
        return MinCuts(t, witness, t_cap)
    return MinCuts(None, None, t_cap)


def solve_discrete_1d(necklace: DiscreteNecklace, q: int | None = None) -> Splitting:
    """A fair splitting with at most ``k(q-1)`` cuts (the fewest possible, ties broken lexicographically)."""
    res = min_cuts_discrete_1d(necklace, q)
    if not res.found:  # pragma: no cover - would contradict the necklace splitting theorem
        raise ArithmeticError("no fair splitting within k(q-1) cuts")
    return res.witness


# -------------------------------------------------------------- continuous


@dataclass(frozen=True)
class Run:
    """Maximal interval of one colour (adjacent equal cells merged)."""

    lo: Fraction
    hi: Fraction
    color: int


def color_runs(coloring: GridColoring) -> tuple[Run, ...]:
    if coloring.d != 1:
        raise InputError("expected a one-dimensional colouring")
    bp = coloring.breakpoints[0]
    runs: list[Run] = []
    for g, c in enumerate(coloring.colors):
        c = int(c)
        if runs and runs[-1].color == c:
            runs[-1] = Run(runs[-1].lo, bp[g + 1], c)
        else:
            runs.append(Run(bp[g], bp[g + 1], c))
    return tuple(runs)


def affine_amounts(runs: Sequence[Run], k: int, lo_var: int, hi_var: int, r: int, s: int) -> list[tuple[dict, Fraction]]:
    """Colour amounts in ``[x_lo, x_hi]`` when ``x_lo`` lies in run ``r`` and ``x_hi`` in run ``s >= r``.

    Each amount is affine in the two variables; returned as ``(coeffs, const)`` per colour.
    """
    out = [[{}, Fraction(0)] for _ in range(k)]
    if r == s:
        out[runs[r].color - 1][0] = {hi_var: 1, lo_var: -1}
        return [(c, v) for c, v in out]
    a = out[runs[r].color - 1]
    a[0][lo_var] = a[0].get(lo_var, 0) - 1
    a[1] += runs[r].hi
    for mid in runs[r + 1 : s]:
        out[mid.color - 1][1] += mid.hi - mid.lo
    a = out[runs[s].color - 1]
    a[0][hi_var] = a[0].get(hi_var, 0) + 1
    a[1] -= runs[s].lo
    return [(c, v) for c, v in out]


Slot = tuple[int, "Fraction | None"]  # (run index, pinned value or None)


@dataclass
class Refutation:
    """One infeasible linear system: a pruned pattern prefix or a full pattern with a labeling."""

    cuts: int
    slots: tuple[Slot, ...]
    labeling: tuple[int, ...] | None
    system: LinearSystem
    farkas: Farkas

    @property
    def kind(self) -> str:
        return "pattern" if self.labeling is not None else "prefix"

    def to_json(self, verbose: bool = False) -> dict:
        doc = {
            "kind": self.kind,
            "cuts": self.cuts,
            "slots": [[r, None if v is None else fmt_rat(v)] for r, v in self.slots],
            "labeling": None if self.labeling is None else list(self.labeling),
            "system_sha256": self.system.digest(),
            "farkas": self.farkas.to_json(),
        }
        if verbose:
            doc["system"] = self.system.to_json()
        return doc


@dataclass(frozen=True)
class _Problem:
    """Everything that defines the pattern space for one number of cuts."""

    runs: tuple[Run, ...]
    k: int
    q: int
    m: int
    gamma: Fraction
    domains: tuple[tuple[Fraction, Fraction], ...]  # per point
    snap: tuple[Fraction, ...] | None  # allowed cut coordinates, if restricted

    @property
    def npoints(self) -> int:
        return self.m + 2

    def run_of(self, v: Fraction) -> int:
        """Greatest run index whose closed interval contains ``v``."""
        for r in range(len(self.runs) - 1, -1, -1):
            if self.runs[r].lo <= v <= self.runs[r].hi:
                return r
        raise DomainError(f"{v} lies outside the colouring")

    def slots(self, i: int) -> list[Slot]:
        lo, hi = self.domains[i]
        if self.snap is not None and 0 < i <= self.m:
            vals = [v for v in self.snap if lo <= v <= hi]
            return [(self.run_of(v), v) for v in vals]
        return [(r, None) for r, run in enumerate(self.runs) if run.lo <= hi and run.hi >= lo]

    def bounds(self, i: int, slot: Slot) -> tuple[Fraction, Fraction]:
        r, v = slot
        if v is not None:
            return v, v
        lo, hi = self.domains[i]
        return max(lo, self.runs[r].lo), min(hi, self.runs[r].hi)

    @property
    def end_bound(self) -> Fraction:
        return min(self.domains[-1][1], self.runs[-1].hi)

    def names(self) -> tuple[str, ...]:
        return ("left",) + tuple(f"cut{i}" for i in range(1, self.m + 1)) + ("right",)

    # systems -------------------------------------------------------------

    def _base(self, slots: Sequence[Slot]) -> SystemBuilder:
        b = SystemBuilder(self.npoints, self.names())
        for i, s in enumerate(slots):
            lo, hi = self.bounds(i, s)
            b.le({i: -1}, -lo)
            b.le({i: 1}, hi)
        return b

    def prefix_system(self, slots: Sequence[Slot]) -> LinearSystem:
        """Slot bounds of the assigned points, every gap row, and the right end's upper bound."""
        b = self._base(slots)
        for i in range(self.m + 1):
            b.le({i: 1, i + 1: -1}, -self.gamma)
        b.le({self.m + 1: 1}, self.end_bound)
        return b.build()

    def amounts(self, i: int, slots: Sequence[Slot]) -> list[tuple[dict, Fraction]]:
        """Affine colour amounts of piece ``[P_i, P_{i+1}]``: per colour ``(coeffs, const)``."""
        return affine_amounts(self.runs, self.k, i, i + 1, slots[i][0], slots[i + 1][0])

    def pattern_system(self, slots: Sequence[Slot], labeling: Sequence[int]) -> LinearSystem:
        b = self._base(slots)
        for i in range(self.m + 1):
            b.le({i: 1, i + 1: -1}, -self.gamma)
        pieces = [self.amounts(i, slots) for i in range(self.m + 1)]
        for lab in range(2, self.q + 1):
            for j in range(self.k):
                coeffs: dict[int, Fraction] = {}
                const = Fraction(0)
                for piece, pl in zip(pieces, labeling):
                    sign = (pl == lab) - (pl == 1)
                    if not sign:
                        continue
                    cf, cst = piece[j]
                    for v, x in cf.items():
                        coeffs[v] = coeffs.get(v, 0) + sign * x
                    const += sign * cst
                coeffs = {v: x for v, x in coeffs.items() if x}
                if coeffs or const:
                    b.eq(coeffs, -const)
        return b.build()

    # search --------------------------------------------------------------

    def chain_farkas(self, system: LinearSystem, src: int, end: int, assigned: int) -> Farkas:
        """Sum of: lower row of point ``src``, gaps ``src..end-1``, upper row of ``end``.

        Rows of a prefix system are ``2*assigned`` bound rows, then ``m+1`` gaps,
        then the right end's upper bound.
        """
        z = [Fraction(0)] * len(system.A_ub)
        z[2 * src] = Fraction(1)
        for g in range(src, end):
            z[2 * assigned + g] = Fraction(1)
        if end < assigned:
            z[2 * end + 1] = Fraction(1)
        else:
            z[-1] = Fraction(1)
        cert = Farkas(tuple(z), ())
        if not verify_farkas(system, cert):  # pragma: no cover - internal guard
            raise ArithmeticError("prefix refutation failed verification")
        return cert

    def search(self, first: int, record: bool) -> "_SubResult":
        """Depth-first over patterns whose left end uses slot number ``first``."""
        out = _SubResult()
        n = self.npoints
        all_slots = [self.slots(i) for i in range(n)]
        start = all_slots[0][first]
        end_hi = self.end_bound
        labelings = list(restricted_growth(self.m + 1, self.q))

        def rec(prefix: list, low: Fraction, src: int) -> bool:
            i = len(prefix) - 1
            # prefix[i] just assigned with lower bound ``low`` coming from point ``src``
            lo_i, hi_i = self.bounds(i, prefix[i])
            if lo_i >= low:
                low, src = lo_i, i
            fail_end = None
            if low > hi_i:
                fail_end = i
            elif low + (self.m + 1 - i) * self.gamma > end_hi:
                fail_end = self.m + 1
            if fail_end is not None:
                out.pruned += 1
                if record:
                    sys_ = self.prefix_system(prefix)
                    out.refutations.append(
                        Refutation(self.m, tuple(prefix), None, sys_, self.chain_farkas(sys_, src, fail_end, i + 1))
                    )
                return False
            if i == n - 1:
                return self.check_pattern(tuple(prefix), labelings, out, record)
            for s in all_slots[i + 1]:
                if not _follows(prefix[i], s):
                    continue
                prefix.append(s)
                found = rec(prefix, low + self.gamma, src)
                prefix.pop()
                if found:
                    return True
            return False

        rec([start], Fraction(self.domains[0][0]) - 1, 0)
        return out

    def check_pattern(self, slots, labelings, out: "_SubResult", record: bool) -> bool:
        out.patterns += 1
        for lab in labelings:
            system = self.pattern_system(slots, lab)
            res = solve_lp(system)
            out.systems += 1
            if res.feasible:
                out.witness = (res.x, lab)
                return True
            if record:
                out.refutations.append(Refutation(self.m, slots, lab, system, res.farkas))
        return False


@dataclass
class _SubResult:
    witness: tuple | None = None
    refutations: list = field(default_factory=list)
    pruned: int = 0
    patterns: int = 0
    systems: int = 0


def _run_subtree(args) -> _SubResult:
    problem, first, record = args
    return problem.search(first, record)


@dataclass
class Certificate1D:
    """Exhaustive refutation: every pattern (for every cut count searched) is infeasible."""

    mode: str  # "fixed" | "window"
    q: int
    t: int
    gamma: Fraction
    region: Box
    runs: tuple[Run, ...]
    snap: tuple[Fraction, ...] | None  # allowed cut coordinates, if restricted
    refutations: list[Refutation]
    prefixes_pruned: int
    patterns_refuted: int
    systems_refuted: int

    def verify(self) -> bool:
        """Re-check every Farkas vector and that the refutations cover the whole pattern tree."""
        if not all(verify_farkas(r.system, r.farkas) for r in self.refutations):
            return False
        problems = {m: _make_problem(self.runs, self.q, m, self.gamma, self.mode, self.region, self.snap)
                    for m in range(self.t + 1)}
        for r in self.refutations:
            p = problems.get(r.cuts)
            if p is None:
                return False
            expect = p.prefix_system(r.slots) if r.labeling is None else p.pattern_system(r.slots, r.labeling)
            if expect.digest() != r.system.digest():
                return False
        return all(_covered(problems[m], [r for r in self.refutations if r.cuts == m]) for m in problems)

    def to_json(self, verbose: bool = False) -> dict:
        return {
            "mode": self.mode,
            "q": self.q,
            "t": self.t,
            "gamma": fmt_rat(self.gamma),
            "region": {"lo": [fmt_rat(x) for x in self.region.lo], "hi": [fmt_rat(x) for x in self.region.hi]},
            "snap": None if self.snap is None else [fmt_rat(x) for x in self.snap],
            "runs": [[fmt_rat(r.lo), fmt_rat(r.hi), r.color] for r in self.runs],
            "prefixes_pruned": self.prefixes_pruned,
            "patterns_refuted": self.patterns_refuted,
            "systems_refuted": self.systems_refuted,
            "refutations": [r.to_json(verbose) for r in self.refutations],
        }


    @classmethod
    def from_json(cls, doc: dict) -> "Certificate1D":
        """Rebuild a certificate; every stored system digest must match the regenerated system."""
        runs = tuple(Run(rat(lo), rat(hi), int(c)) for lo, hi, c in doc["runs"])
        region = Box(tuple(rat(x) for x in doc["region"]["lo"]), tuple(rat(x) for x in doc["region"]["hi"]))
        snap = None if doc["snap"] is None else tuple(rat(x) for x in doc["snap"])
        gamma = rat(doc["gamma"])
        problems = {m: _make_problem(runs, doc["q"], m, gamma, doc["mode"], region, snap) for m in range(doc["t"] + 1)}
        refs = []
        for r in doc["refutations"]:
            if r["cuts"] not in problems:
                raise InputError(f"refutation for {r['cuts']} cuts outside 0..{doc['t']}")
            p = problems[r["cuts"]]
            slots = tuple((int(i), None if v is None else rat(v)) for i, v in r["slots"])
            lab = None if r["labeling"] is None else tuple(r["labeling"])
            system = p.prefix_system(slots) if lab is None else p.pattern_system(slots, lab)
            if system.digest() != r["system_sha256"]:
                raise InputError("stored system digest does not match the regenerated system")
            farkas = Farkas(tuple(rat(x) for x in r["farkas"]["z_ub"]), tuple(rat(x) for x in r["farkas"]["z_eq"]))
            refs.append(Refutation(r["cuts"], slots, lab, system, farkas))
        return cls(doc["mode"], doc["q"], doc["t"], gamma, region, runs, snap, refs,
                   doc["prefixes_pruned"], doc["patterns_refuted"], doc["systems_refuted"])


def _covered(p: _Problem, refs: list[Refutation]) -> bool:
    """Every monotone slot sequence is cut off by a prefix refutation or has all labelings refuted."""
    prefixes = {r.slots for r in refs if r.labeling is None}
    full: dict = {}
    for r in refs:
        if r.labeling is not None:
            full.setdefault(r.slots, set()).add(r.labeling)
    labelings = set(restricted_growth(p.m + 1, p.q))
    all_slots = [p.slots(i) for i in range(p.npoints)]

    def walk(prefix: tuple) -> bool:
        if prefix in prefixes:
            return True
        if len(prefix) == p.npoints:
            return full.get(prefix, set()) >= labelings
        nxt = all_slots[len(prefix)]
        return all(walk(prefix + (s,)) for s in nxt if not prefix or _follows(prefix[-1], s))

    return walk(())


def _make_problem(runs, q, m, gamma, mode, region: Box, snap) -> _Problem:
    lo, hi = region.lo[0], region.hi[0]
    if mode == "fixed":
        domains = ((lo, lo),) + ((lo, hi),) * m + ((hi, hi),)
    else:
        domains = ((lo, hi),) * (m + 2)
    k = max(r.color for r in runs)
    return _Problem(runs, k, q, m, gamma, domains, snap)


def _follows(prev: Slot, nxt: Slot) -> bool:
    """Monotone patterns: run indices never decrease, pinned values never decrease."""
    if nxt[0] != prev[0]:
        return nxt[0] > prev[0]
    return prev[1] is None or nxt[1] is None or nxt[1] >= prev[1]


@dataclass
class Search1DResult:
    """A witness splitting, or (when requested) a certificate that none exists."""

    witness: Splitting | None
    certificate: Certificate1D | None
    prefixes_pruned: int
    patterns: int
    systems: int

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def _search(
    coloring: GridColoring, q: int, t: int, gamma, mode: str, region: Box, snap, certify: bool, jobs: int
) -> Search1DResult:
    if coloring.d != 1:
        raise InputError("one-dimensional search needs a one-dimensional colouring")
    if q < 1 or t < 0:
        raise InputError("need q >= 1 and t >= 0")
    gamma = rat(gamma)
    if gamma < 0:
        raise InputError("granularity must be non-negative")
    if not coloring.bounds.contains(region):
        raise DomainError(f"{region} is not inside the colouring domain")
    if mode == "window" and gamma <= 0:
        raise InputError("window mode needs a positive granularity (otherwise a point is a fair necklace)")
    runs = color_runs(coloring)
    # snap cuts to the grid breakpoints (not only run boundaries)
    snap_key = tuple(coloring.breakpoints[0]) if snap else None
    pruned = patterns = systems = 0
    refutations: list[Refutation] = []
    for m in range(t + 1):
        problem = _make_problem(runs, q, m, gamma, mode, region, snap_key)
        starts = range(len(problem.slots(0)))
        subs = ordered_map(_run_subtree, [(problem, s, certify) for s in starts], jobs)
        for sub in subs:
            pruned += sub.pruned
            patterns += sub.patterns
            systems += sub.systems
            if sub.witness is not None:
                x, lab = sub.witness
                witness = _witness(coloring, problem, x, lab, gamma)
                return Search1DResult(witness, None, pruned, patterns, systems)
            refutations.extend(sub.refutations)
    cert = None
    if certify:
        cert = Certificate1D(mode, q, t, gamma, region, runs, snap_key, refutations, pruned, patterns, systems)
    return Search1DResult(None, cert, pruned, patterns, systems)


def _witness(coloring: GridColoring, p: _Problem, x, labeling, gamma) -> Splitting:
    box = Box((x[0],), (x[-1],))
    cuts = tuple(AxisCut(0, v) for v in x[1:-1])
    s = Splitting(box, cuts, labeling, p.q)
    if not is_fair(part_measures(coloring, s)) or granularity_axis(s) < gamma:  # pragma: no cover
        raise ArithmeticError("continuous search produced an invalid witness")
    return s


def solve_continuous_1d(
    coloring: GridColoring,
    box: Box | None = None,
    q: int = 2,
    t: int = 1,
    gamma=0,
    snap_to_breakpoints: bool = False,
    certify: bool = False,
    jobs: int = 1,
) -> Search1DResult:
    """Fair ``q``-splitting of the fixed interval ``box`` with at most ``t`` cuts and gaps ``>= gamma``.

    Cut counts ``0..t`` are tried in order. With ``snap_to_breakpoints`` cuts
    may only sit on grid breakpoints (the discrete problem on unit grids).
    """
    box = coloring.bounds if box is None else box
    if box.hi[0] <= box.lo[0]:
        raise InputError("the necklace interval must be nontrivial")
    return _search(coloring, q, t, gamma, "fixed", box, snap_to_breakpoints, certify, jobs)


def search_window_1d(
    coloring: GridColoring, q: int, t: int, gamma, window: Box | None = None, certify: bool = True, jobs: int = 1
) -> Search1DResult:
    """Is there *any* interval inside ``window`` with a fair splitting (``<= t`` cuts, gaps ``>= gamma``)?

    Both interval endpoints are unknowns alongside the cuts.
    """
    window = coloring.bounds if window is None else window
    return _search(coloring, q, t, gamma, "window", window, False, certify, jobs)


__all__ = [
    "Certificate1D",
    "MinCuts",
    "Refutation",
    "Run",
    "Search1DResult",
    "affine_amounts",
    "color_runs",
    "min_cuts_discrete_1d",
    "search_window_1d",
    "solve_continuous_1d",
    "solve_discrete_1d",
]
