"""``necklace-lab`` command line.

Exit codes: 0 completed, 1 an acceptance criterion failed (``bench`` only),
2 infeasible or certified absent, 3 input error, 4 budget exhausted without a
certificate. Result documents go to ``--out`` (JSON or CSV), per-trial records
to ``--log`` (JSONL), a short summary to stdout.

Seeds: ``--seed`` (else ``NECKLACE_LAB_SEED``, else 0) is a 64-bit master
seed. A command that needs several random streams derives stream ``i`` as
``SeedSequence(seed, spawn_key=(i,))``: stream 0 builds instances, stream 1
drives searches.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import serialize
from .acceptance import run_all
from .adversary import (
    AdversaryParams,
    ProbeBudget,
    audit_dof,
    certify_no_split_1d,
    generate_bad_coloring,
    probe_no_split_md,
    white_distance,
)
from .core import Box, DiscreteNecklace, GridColoring, Splitting, is_fair, part_counts, part_measures
from .discrete_bounds import count_splittable_subsets, counting_bound_report, find_hard_subset
from .distinguish import PairSearchBudget, audit_distinguish, find_equal_cubes
from .errors import NecklaceError
from .exact import fmt_rat, rat
from .multidim import min_cuts_discrete_md, split_via_lift
from .numeric import SearchBudget, solve_grid_axis_cuts_md
from .splitter1d import min_cuts_discrete_1d, solve_continuous_1d, solve_discrete_1d

EXIT_OK, EXIT_FAILED, EXIT_ABSENT, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Outcome:
    def __init__(self, code: int, summary: list[str], doc: dict | None = None,
                 rows: list[dict] | None = None, log: list[dict] | None = None):
        self.code = code
        self.summary = summary
        self.doc = doc
        self.rows = rows
        self.log = log or []


def derive_seed(seed: int, stream: int) -> int:
    words = np.random.SeedSequence(seed, spawn_key=(stream,)).generate_state(2, np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


# ----------------------------------------------------------------- helpers


def _fraction(text: str) -> Fraction:
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _load_instance(args, q: int | None = None):
    if getattr(args, "beads", None):
        return DiscreteNecklace.from_string(args.beads, q or 2)
    if not getattr(args, "instance", None):
        raise UsageError("an instance is required (--instance FILE or --beads STRING)")
    try:
        obj = serialize.load(args.instance)
    except OSError as exc:
        raise UsageError(f"cannot read {args.instance}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.instance} is not JSON: {exc}") from exc
    if isinstance(obj, DiscreteNecklace) and q is not None and q != obj.q:
        obj = DiscreteNecklace(obj.cells, q, obj.k)
    return obj


def _checked(instance, s: Splitting) -> Splitting:
    """Revalidate a witness exactly before it is written anywhere."""
    pm = part_counts(instance, s) if isinstance(instance, DiscreteNecklace) else part_measures(instance, s)
    if not is_fair(pm):  # pragma: no cover - every solver verifies already
        raise ArithmeticError("refusing to write an unfair witness")
    return s


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def _cuts_text(s: Splitting) -> str:
    return ", ".join(f"z{c.axis + 1}={fmt_rat(c.coordinate)}" for c in s.cuts) or "none"


def _flatten(doc: dict, prefix: str = "") -> dict:
    row = {}
    for key, val in doc.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            row.update(_flatten(val, name + "."))
        elif isinstance(val, list):
            row[name] = json.dumps(val, separators=(",", ":"))
        else:
            row[name] = val
    return row


def _csv_text(rows: list[dict]) -> str:
    fields: list[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _window(text):
    if text is None:
        return None
    parts = [rat(x) for x in text.split(",")]
    if len(parts) % 2:
        raise UsageError("--window needs lo and hi for every axis: lo1,..,lod,hi1,..,hid")
    d = len(parts) // 2
    return Box(tuple(parts[:d]), tuple(parts[d:]))


# ----------------------------------------------------------------- commands


def cmd_solve_1d(args) -> Outcome:
    inst = _load_instance(args, args.q)
    if isinstance(inst, DiscreteNecklace):
        if inst.d != 1:
            raise UsageError("solve-1d needs a one-dimensional instance")
        s = _checked(inst, solve_discrete_1d(inst))
        return Outcome(EXIT_OK, [f"cuts: {s.t}", f"positions: {_cuts_text(s)}", f"labels: {list(s.labeling)}"],
                       serialize.to_json(s))
    if not isinstance(inst, GridColoring) or inst.d != 1:
        raise UsageError("solve-1d needs a one-dimensional discrete necklace or grid colouring")
    q = args.q or 2
    t = inst.k * (q - 1) if args.t is None else args.t
    res = solve_continuous_1d(inst, q=q, t=t, gamma=args.gamma, certify=args.certify, jobs=args.jobs)
    if res.witness is not None:
        s = _checked(inst, res.witness)
        return Outcome(EXIT_OK, [f"cuts: {s.t}", f"positions: {_cuts_text(s)}", f"labels: {list(s.labeling)}"],
                       serialize.to_json(s))
    summary = [f"no fair {q}-splitting with at most {_plural(t, 'cut')}", f"patterns refuted: {res.patterns}"]
    if res.certificate is not None:
        ok = res.certificate.verify()
        summary.append(f"certificate verified: {ok}")
        return Outcome(EXIT_ABSENT, summary, _certificate_doc(res.certificate, args.verbose))
    body = {"found": False, "patterns_refuted": res.patterns, "prefixes_pruned": res.prefixes_pruned, "t": t}
    return Outcome(EXIT_ABSENT, summary, serialize.report("search-report", body, 1, inst.k, q))


def _certificate_doc(cert, verbose: bool) -> dict:
    doc = serialize.to_json(cert)
    if verbose:
        doc["certificate"] = cert.to_json(verbose=True)
    return doc


def cmd_solve_md(args) -> Outcome:
    inst = _load_instance(args)
    if not isinstance(inst, GridColoring):
        raise UsageError("solve-md needs a grid colouring (use min-cuts or lift-split for discrete necklaces)")
    t = args.per_axis if args.per_axis else args.t
    budget = SearchBudget(args.starts, args.max_nfev, derive_seed(args.seed, 1))
    res = solve_grid_axis_cuts_md(inst, q=args.q, t=t, gamma=args.gamma, budget=budget, jobs=args.jobs)
    if res.witness is not None:
        s = _checked(inst, res.witness)
        return Outcome(EXIT_OK, [f"cuts: {s.t}", f"positions: {_cuts_text(s)}", f"labels: {list(s.labeling)}"],
                       serialize.to_json(s))
    body = res.to_json()
    return Outcome(EXIT_BUDGET, [f"no witness found ({res.patterns} patterns, {res.starts} starts); not a certificate"],
                   serialize.report("search-report", body, inst.d, inst.k, args.q))


def cmd_lift_split(args) -> Outcome:
    inst = _load_instance(args, args.q)
    if not isinstance(inst, DiscreteNecklace):
        raise UsageError("lift-split needs a discrete necklace")
    s = _checked(inst, split_via_lift(inst))
    bound = (2 * inst.d - 1) * inst.k * (inst.q - 1)
    return Outcome(EXIT_OK, [f"cuts: {s.t} (bound {bound})", f"positions: {_cuts_text(s)}"], serialize.to_json(s))


def cmd_min_cuts(args) -> Outcome:
    inst = _load_instance(args, args.q)
    if not isinstance(inst, DiscreteNecklace):
        raise UsageError("min-cuts needs a discrete necklace")
    if inst.d == 1:
        m = min_cuts_discrete_1d(inst, t_cap=args.t_cap)
    else:
        m = min_cuts_discrete_md(inst, t_cap=args.t_cap, budgets=args.budgets)
    if not m.found:
        body = {"t_min": None, "t_cap": m.t_cap}
        return Outcome(EXIT_ABSENT, [f"no fair splitting with at most {_plural(m.t_cap, 'cut')}"],
                       serialize.report("min-cuts", body, inst.d, inst.k, inst.q))
    s = _checked(inst, m.witness)
    return Outcome(EXIT_OK, [str(m.t_min), f"positions: {_cuts_text(s)}", f"labels: {list(s.labeling)}"],
                   serialize.to_json(s))


def _adversary(args, d: int) -> tuple[AdversaryParams, GridColoring]:
    p = AdversaryParams(d=d, k=args.k, q=args.q, t=args.t, n=args.n or 1, N=args.N, B=args.B,
                        eps=args.eps, seed=derive_seed(args.seed, 0))
    return p, generate_bad_coloring(p)


def _adversary_options(sp, with_d: bool = True):
    if with_d:
        sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--k", type=int, default=4)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--n", type=int, default=None, help="window half-extent (default 1)")
    sp.add_argument("--N", type=int, default=None, help="background grid resolution (default 4n^2+1)")
    sp.add_argument("--B", type=int, default=32, help="bits per random side length")
    sp.add_argument("--eps", type=_fraction, default=Fraction(1, 2))


def cmd_gen_adversary(args) -> Outcome:
    p, g = _adversary(args, args.d)
    summary = [f"grid cells: {g.colors.size}", f"N = {p.N}, delta = {fmt_rat(p.delta)}",
               f"differs from white on measure {float(white_distance(p)):.3e}"]
    return Outcome(EXIT_OK, summary, serialize.to_json(g))


def cmd_certify_1d(args) -> Outcome:
    if args.instance:
        g = _load_instance(args)
        if not isinstance(g, GridColoring) or g.d != 1:
            raise UsageError("certify-1d needs a one-dimensional grid colouring")
        n = args.n
    else:
        _, g = _adversary(args, 1)
        n = args.n or 1
    window = _window(args.window)
    gamma = args.gamma
    if gamma is None and n is None:
        raise UsageError("give --gamma or --n")
    res = certify_no_split_1d(g, args.q, args.t, gamma=gamma, window=window, n=n, jobs=args.jobs)
    if res.witness is not None:
        s = _checked(g, res.witness)
        box = f"[{fmt_rat(s.box.lo[0])}, {fmt_rat(s.box.hi[0])}]"
        return Outcome(EXIT_OK, [f"counterexample: interval {box}, cuts {_cuts_text(s)}, labels {list(s.labeling)}"],
                       serialize.to_json(s))
    cert = res.certificate
    ok = cert.verify()
    summary = [f"certified: no fair {args.q}-splitting with at most {_plural(args.t, 'cut')}",
               f"refutations: {len(cert.refutations)} (patterns {res.patterns}, pruned prefixes {res.prefixes_pruned})",
               f"certificate verified: {ok}"]
    log = [{"cuts": r.cuts, "kind": r.kind, "system_sha256": r.system.digest()} for r in cert.refutations]
    return Outcome(EXIT_ABSENT if ok else EXIT_FAILED, summary, _certificate_doc(cert, args.verbose), log=log)


def cmd_probe_md(args) -> Outcome:
    if args.instance:
        g = _load_instance(args)
        if not isinstance(g, GridColoring):
            raise UsageError("probe-md needs a grid colouring")
    else:
        _, g = _adversary(args, args.d)
    if g.d < 2:
        raise UsageError("probe-md needs d >= 2 (use certify-1d)")
    gamma = args.gamma if args.gamma is not None else Fraction(1, args.n or 1)
    budget = ProbeBudget(args.boxes, SearchBudget(args.starts, args.max_nfev), derive_seed(args.seed, 1))
    rep = probe_no_split_md(g, args.q, args.t, gamma, window=_window(args.window), budget=budget, jobs=args.jobs)
    body = rep.to_json()
    if rep.witness is not None:
        _checked(g, rep.witness)
        body["witness"] = serialize.to_json(rep.witness)
    log = [{"box": i + 1, "best_residual": r} for i, r in enumerate(rep.best_residual_trace)]
    doc = serialize.report("probe-report", body, g.d, g.k, args.q)
    if rep.witness is not None:
        return Outcome(EXIT_OK, [f"witness found in box {rep.attempts}: {_cuts_text(rep.witness)}"], doc, log=log)
    return Outcome(EXIT_BUDGET, [f"no witness in {rep.attempts} boxes (best residual {rep.best_residual:.3e}); "
                                 "not a certificate"], doc, log=log)


def cmd_audit_dof(args) -> Outcome:
    a = audit_dof(args.d, args.k, args.q, args.t, args.cuts, args.target, args.shape)
    body = {
        "t": a.t, "cut_type": a.cut_type, "target": a.target, "shape": a.shape, "regime": a.regime,
        "lhs": a.lhs, "rhs": a.rhs, "verdict": a.verdict, "unknowns": a.unknowns,
        "color_equations": a.color_equations, "volume_equations": a.volume_equations,
    }
    summary = [f"verdict: {'yes' if a.verdict else 'no'} ({a.lhs} {'>' if a.verdict else '<='} {a.rhs}, {a.regime})"]
    return Outcome(EXIT_OK, summary, serialize.report("dof-audit", body, a.d, a.k, a.q))


def cmd_distinguish(args) -> Outcome:
    if args.audit:
        if args.d is None or args.k is None:
            raise UsageError("--audit needs --d and --k")
        a = audit_distinguish(args.d, args.k, args.shape)
        body = {"shape": a.shape, "threshold": a.threshold, "guaranteed": a.guaranteed,
                "conjectured_impossible": a.conjectured_impossible, "unknowns": a.unknowns, "equations": a.equations}
        verdict = "yes" if a.guaranteed else "no"
        return Outcome(EXIT_OK, [f"distinguishing colourings guaranteed: {verdict} (threshold k >= {a.threshold})"],
                       serialize.report("distinguish-audit", body, a.d, a.k))
    g = _load_instance(args)
    if not isinstance(g, GridColoring):
        raise UsageError("distinguish needs a grid colouring")
    if args.sigma is None and args.n is None:
        raise UsageError("give --sigma or --n")
    budget = PairSearchBudget(args.starts, args.max_nfev, derive_seed(args.seed, 1))
    pair = find_equal_cubes(g, window=_window(args.window), sigma=args.sigma, n=args.n, budget=budget)
    if pair is None:
        code = EXIT_ABSENT if g.d == 1 else EXIT_BUDGET
        note = "exhaustive" if g.d == 1 else "not a certificate"
        return Outcome(code, [f"no equal-measure cube pair ({note})"])
    a = f"[{', '.join(fmt_rat(x) for x in pair.a.lo)}] side {fmt_rat(pair.a.extents[0])}"
    b = f"[{', '.join(fmt_rat(x) for x in pair.b.lo)}]"
    return Outcome(EXIT_OK, [f"pair: corners {a} and {b}", f"measure: {serialize.rats(pair.measure)}"],
                   serialize.to_json(pair))


def cmd_count_discrete(args) -> Outcome:
    rows = []
    for n in args.n:
        for d in args.d:
            for q in args.q:
                for t in args.t:
                    c = count_splittable_subsets(n, d, q, t)
                    b = counting_bound_report(n, d, q, t)
                    rows.append({"n": n, "d": d, "q": q, "t": t, "splittable": c.splittable,
                                 "divisible": c.divisible, "total": c.total,
                                 "cut_choices": b.cut_choices, "labelings": b.labelings,
                                 "max_fair_sets": b.max_fair_sets, "estimate": b.estimate,
                                 "estimate_dominates": b.estimate >= c.splittable})
    hard = []
    if args.hard:
        for n in args.n:
            for d in args.d:
                for q in args.q:
                    h = find_hard_subset(n, d, q)
                    hard.append({"n": n, "d": d, "q": q, "target": -(-d * q // 2),
                                 "cells": None if h is None else sorted(list(c) for c in h.cells),
                                 "min_cuts": None if h is None else h.min_cuts})
    # integers beyond 2^53 are kept exact as strings in JSON
    doc_rows = [{k: (str(v) if isinstance(v, int) and not isinstance(v, bool) and abs(v) >= 2**53 else v)
                 for k, v in r.items()} for r in rows]
    doc = serialize.report("subset-count", {"rows": doc_rows, "hard_subsets": hard})
    summary = [f"n={r['n']} d={r['d']} q={r['q']} t={r['t']}: {r['splittable']} splittable of {r['divisible']} "
               f"divisible, estimate {r['estimate']}" for r in rows]
    summary += [f"hard subset n={h['n']} d={h['d']} q={h['q']}: {h['cells']} needs {h['min_cuts']} cuts" for h in hard]
    return Outcome(EXIT_OK, summary, doc, rows=rows, log=rows + hard)


def cmd_bench(args) -> Outcome:
    numbers = args.criteria or tuple(range(1, 11))
    if any(not 1 <= n <= 10 for n in numbers):
        raise UsageError("criteria are numbered 1..10")
    results = run_all(args.seed, numbers)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed, "summary": r.summary} for r in results]
    log = [{"criterion": r.number, **rec} for r in results for rec in r.records]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    return Outcome(code, [r.line() for r in results], serialize.report("bench", {"criteria": rows}), rows=rows, log=log)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default: $NECKLACE_LAB_SEED or 0)")
    common.add_argument("--out", type=Path, default=None, help="write the result document here")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--log", type=Path, default=None, help="write per-trial JSONL records here")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--verbose", action="store_true", help="include exact linear systems in certificates")

    p = _Parser(prog="necklace-lab", description="Fair splitting of coloured cubes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(fn=fn)
        return sp

    def instance(sp):
        sp.add_argument("--instance", type=Path)
        sp.add_argument("--beads", help="one-dimensional discrete necklace, one letter per colour")

    sp = add("solve-1d", cmd_solve_1d, "fair splitting of a one-dimensional necklace")
    instance(sp)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--t", type=int, default=None, help="cut budget for grid colourings (default k(q-1))")
    sp.add_argument("--gamma", type=_fraction, default=Fraction(0))
    sp.add_argument("--certify", action="store_true", help="emit an infeasibility certificate when none exists")

    sp = add("solve-md", cmd_solve_md, "numeric search on a grid colouring, d >= 2")
    sp.add_argument("--instance", type=Path)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--per-axis", type=_ints, default=None, help="exact cut counts per axis, e.g. 1,1")
    sp.add_argument("--gamma", type=_fraction, default=Fraction(0))
    sp.add_argument("--starts", type=int, default=8)
    sp.add_argument("--max-nfev", type=int, default=200)

    sp = add("lift-split", cmd_lift_split, "constructive splitting through the lexicographic lift")
    instance(sp)
    sp.add_argument("--q", type=int, default=None)

    sp = add("min-cuts", cmd_min_cuts, "exact minimum number of cuts of a discrete necklace")
    instance(sp)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--t-cap", type=int, default=None)
    sp.add_argument("--budgets", type=_ints, default=None, help="per-axis cut limits, e.g. 2,1")

    sp = add("gen-adversary", cmd_gen_adversary, "adversarial grid colouring of [-n, n]^d")
    _adversary_options(sp)

    sp = add("certify-1d", cmd_certify_1d, "exact certificate that no interval splits fairly")
    sp.add_argument("--instance", type=Path)
    _adversary_options(sp, with_d=False)
    sp.add_argument("--gamma", type=_fraction, default=None, help="granularity (default 1/n)")
    sp.add_argument("--window", default=None, help="lo,hi (default [-n, n] or the colouring domain)")

    sp = add("probe-md", cmd_probe_md, "random probing for fair splittings, d >= 2 (no certificate)")
    sp.add_argument("--instance", type=Path)
    _adversary_options(sp)
    sp.set_defaults(d=2)
    sp.add_argument("--gamma", type=_fraction, default=None, help="granularity (default 1/n)")
    sp.add_argument("--window", default=None)
    sp.add_argument("--boxes", type=int, default=8)
    sp.add_argument("--starts", type=int, default=8)
    sp.add_argument("--max-nfev", type=int, default=200)

    sp = add("audit-dof", cmd_audit_dof, "degrees-of-freedom threshold for one regime")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--cuts", choices=("axis", "arbitrary"), default="axis")
    sp.add_argument("--target", choices=("window", "fixed"), default="window")
    sp.add_argument("--shape", choices=("cube", "cuboid"), default="cube")

    sp = add("distinguish", cmd_distinguish, "two cubes with equal colour measures")
    sp.add_argument("--instance", type=Path)
    sp.add_argument("--sigma", type=_fraction, default=None)
    sp.add_argument("--n", type=int, default=None, help="separation 1/n")
    sp.add_argument("--window", default=None)
    sp.add_argument("--starts", type=int, default=64)
    sp.add_argument("--max-nfev", type=int, default=300)
    sp.add_argument("--audit", action="store_true", help="report the colour threshold instead of searching")
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--shape", choices=("cube", "cuboid"), default="cube")

    sp = add("count-discrete", cmd_count_discrete, "count splittable subsets of {1..n}^d")
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--d", type=int, nargs="+", required=True)
    sp.add_argument("--q", type=int, nargs="+", default=[2])
    sp.add_argument("--t", type=int, nargs="+", required=True)
    sp.add_argument("--hard", action="store_true", help="also search a subset needing ceil(dq/2) cuts")

    sp = add("bench", cmd_bench, "run the acceptance experiments")
    sp.add_argument("--criteria", type=int, nargs="+", default=None)
    return p


def _resolve_seed(args) -> None:
    if args.seed is None:
        env = os.environ.get("NECKLACE_LAB_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"NECKLACE_LAB_SEED is not an integer: {env!r}") from None
    if not 0 <= args.seed < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")


def _write(outcome: Outcome, args) -> None:
    if args.out is not None and outcome.doc is not None:
        if args.format == "csv":
            text = _csv_text(outcome.rows if outcome.rows is not None else [_flatten(outcome.doc)])
        else:
            text = serialize.dumps(outcome.doc)
        args.out.write_text(text)
    if args.log is not None:
        args.log.write_text("".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n"
                                    for r in outcome.log))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _resolve_seed(args)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        outcome = args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NecklaceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for line in outcome.summary:
        print(line)
    try:
        _write(outcome, args)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return outcome.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
