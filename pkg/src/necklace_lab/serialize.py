"""Versioned JSON documents for necklaces, colourings, splittings and results.

Every document carries ``format``, ``version``, ``kind``, ``d``, ``k`` and
``q`` (``null`` where a field does not apply). Rationals are strings
``"p/q"``; cell maps are flat lists in lexicographic (C) order. Output is
canonical: sorted keys and fixed separators, so ``dumps(loads(s)) == s``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .core import AxisCut, Box, DiscreteNecklace, GridColoring, Splitting
from .errors import InputError
from .exact import fmt_rat, rat

FORMAT = "necklace-lab"
VERSION = 1

_ENCODERS: dict[type, Callable[[Any], dict]] = {}
_DECODERS: dict[str, Callable[[dict], Any]] = {}


def register(cls: type, kind: str, encode: Callable[[Any], dict], decode: Callable[[dict], Any]) -> None:
    """Add a document kind. Other modules register their own result types."""
    _ENCODERS[cls] = lambda obj: {"kind": kind, **encode(obj)}
    _DECODERS[kind] = decode


def header(kind: str, d=None, k=None, q=None) -> dict:
    return {"format": FORMAT, "version": VERSION, "kind": kind, "d": d, "k": k, "q": q}


def rats(values) -> list[str]:
    return [fmt_rat(v) for v in values]


def box_to_json(box: Box) -> dict:
    return {"lo": rats(box.lo), "hi": rats(box.hi)}


def box_from_json(doc: dict) -> Box:
    return Box(tuple(rat(x) for x in doc["lo"]), tuple(rat(x) for x in doc["hi"]))


def to_json(obj) -> dict:
    enc = _ENCODERS.get(type(obj))
    if enc is None:
        raise TypeError(f"no JSON encoding registered for {type(obj).__name__}")
    doc = enc(obj)
    base = header(doc["kind"])
    base.update(doc)
    return base


def from_json(doc: dict):
    if doc.get("format") != FORMAT:
        raise InputError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise InputError(f"unsupported document version {doc.get('version')}")
    dec = _DECODERS.get(doc.get("kind"))
    if dec is None:
        raise InputError(f"unknown document kind {doc.get('kind')!r}")
    return dec(doc)


def dumps(obj) -> str:
    doc = obj if isinstance(obj, dict) else to_json(obj)
    return json.dumps(doc, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def loads(text: str):
    return from_json(json.loads(text))


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def load(path):
    return loads(Path(path).read_text())


def _enc_discrete(n: DiscreteNecklace) -> dict:
    return {"d": n.d, "k": n.k, "q": n.q, "sides": list(n.sides), "cells": [int(c) for c in n.cells.ravel()]}


def _dec_discrete(doc: dict) -> DiscreteNecklace:
    cells = np.array(doc["cells"], dtype=np.int64).reshape(doc["sides"])
    return DiscreteNecklace(cells, doc["q"], doc["k"])


def _enc_grid(g: GridColoring) -> dict:
    return {
        "d": g.d,
        "k": g.k,
        "q": None,
        "breakpoints": [rats(axis) for axis in g.breakpoints],
        "cells": [int(c) for c in g.colors.ravel()],
    }


def _dec_grid(doc: dict) -> GridColoring:
    bps = tuple(tuple(rat(x) for x in axis) for axis in doc["breakpoints"])
    shape = [len(axis) - 1 for axis in bps]
    return GridColoring(bps, np.array(doc["cells"], dtype=np.int64).reshape(shape), doc["k"])


def _enc_splitting(s: Splitting) -> dict:
    return {
        "d": s.box.d,
        "q": s.q,
        "box": box_to_json(s.box),
        "cuts": [{"axis": c.axis, "coordinate": fmt_rat(c.coordinate)} for c in s.cuts],
        "labeling": list(s.labeling),
    }


def _dec_splitting(doc: dict) -> Splitting:
    cuts = tuple(AxisCut(c["axis"], rat(c["coordinate"])) for c in doc["cuts"])
    return Splitting(box_from_json(doc["box"]), cuts, tuple(doc["labeling"]), doc["q"])


register(DiscreteNecklace, "discrete", _enc_discrete, _dec_discrete)
register(GridColoring, "grid", _enc_grid, _dec_grid)
register(Splitting, "splitting", _enc_splitting, _dec_splitting)


# Result types live in modules that import core; register them here so that
# loading this module is enough to read any document.
from .distinguish import CubePair  # noqa: E402
from .polytope import ArbitrarySplitting, Hyperplane  # noqa: E402
from .splitter1d import Certificate1D  # noqa: E402


def _enc_certificate(c: Certificate1D) -> dict:
    return {"d": 1, "k": max(r.color for r in c.runs), "q": c.q, "certificate": c.to_json(verbose=False)}


def _dec_certificate(doc: dict) -> Certificate1D:
    return Certificate1D.from_json(doc["certificate"])


def _enc_pair(p: CubePair) -> dict:
    return {"d": p.a.d, "k": len(p.measure), "a": box_to_json(p.a), "b": box_to_json(p.b), "measure": rats(p.measure)}


def _dec_pair(doc: dict) -> CubePair:
    return CubePair(box_from_json(doc["a"]), box_from_json(doc["b"]), tuple(rat(x) for x in doc["measure"]))


def _enc_arbitrary(s: ArbitrarySplitting) -> dict:
    return {
        "d": s.box.d,
        "q": s.q,
        "box": box_to_json(s.box),
        "hyperplanes": [{"normal": rats(h.normal), "offset": fmt_rat(h.offset)} for h in s.hyperplanes],
        "labeling": [{"signs": list(k), "label": v} for k, v in sorted(s.labeling.items())],
    }


def _dec_arbitrary(doc: dict) -> ArbitrarySplitting:
    hs = tuple(Hyperplane(tuple(rat(x) for x in h["normal"]), rat(h["offset"])) for h in doc["hyperplanes"])
    lab = {tuple(e["signs"]): e["label"] for e in doc["labeling"]}
    return ArbitrarySplitting(box_from_json(doc["box"]), hs, lab, doc["q"])


register(Certificate1D, "certificate", _enc_certificate, _dec_certificate)
register(CubePair, "cube-pair", _enc_pair, _dec_pair)
register(ArbitrarySplitting, "arbitrary-splitting", _enc_arbitrary, _dec_arbitrary)


REPORT_KINDS = (
    "min-cuts",
    "search-report",
    "probe-report",
    "dof-audit",
    "distinguish-audit",
    "subset-count",
    "counting-bound",
    "hard-subset",
    "rank-report",
    "bench",
)
for _kind in REPORT_KINDS:
    _DECODERS[_kind] = dict


def report(kind: str, body: dict, d=None, k=None, q=None) -> dict:
    """A plain result document (reports, audits, counts); read back as a dict."""
    if kind not in REPORT_KINDS:
        raise InputError(f"unknown report kind {kind!r}")
    doc = header(kind, d, k, q)
    doc.update(body)
    return doc
