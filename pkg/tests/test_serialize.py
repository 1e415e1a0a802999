import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from necklace_lab import serialize
from necklace_lab.core import Box, DiscreteNecklace, GridColoring, Splitting, AxisCut
from necklace_lab.distinguish import find_equal_cubes
from necklace_lab.errors import InputError
from necklace_lab.polytope import ArbitrarySplitting, Hyperplane
from necklace_lab.splitter1d import solve_continuous_1d

from helpers import discrete_necklaces, grid_colorings


def roundtrip(obj):
    text = serialize.dumps(obj)
    back = serialize.loads(text)
    assert serialize.dumps(back) == text
    return back


@given(st.integers(1, 3).flatmap(lambda d: discrete_necklaces(d=d, k=3)))
def test_discrete_roundtrip(n):
    back = roundtrip(n)
    assert back == n


@given(st.integers(1, 3).flatmap(lambda d: grid_colorings(d=d, k=3)))
def test_grid_roundtrip(c):
    assert roundtrip(c) == c


def test_document_layout():
    n = DiscreteNecklace(np.array([[1, 2], [2, 1]]), 2)
    doc = json.loads(serialize.dumps(n))
    assert doc["format"] == "necklace-lab" and doc["version"] == 1
    assert (doc["kind"], doc["d"], doc["k"], doc["q"]) == ("discrete", 2, 2, 2)
    assert doc["cells"] == [1, 2, 2, 1]  # lexicographic cell order
    g = json.loads(serialize.dumps(GridColoring(((0, F(1, 3), 1),), np.array([1, 2]), 2)))
    assert "1/3" in json.dumps(g)


def test_splitting_roundtrip():
    s = Splitting(Box((0, 0), (1, 1)), (AxisCut(1, F(1, 3)), AxisCut(0, F(2, 7))), (1, 2, 2, 1), 2)
    assert roundtrip(s) == s


def test_arbitrary_roundtrip():
    h = Hyperplane((F(2), F(2)), F(2))  # normalised to x + y = 1
    s = ArbitrarySplitting(Box((0, 0), (1, 1)), (h,), {(-1,): 1, (1,): 2}, 2)
    back = roundtrip(s)
    assert back == s and back.hyperplanes[0].normal == (1, 1)


def test_certificate_roundtrip():
    c = GridColoring(((0, F(1, 2), 1),), np.array([1, 2]), 2)
    res = solve_continuous_1d(c, q=2, t=0, certify=True)
    cert = roundtrip(res.certificate)
    assert cert.verify()


def test_tampered_certificate_rejected():
    c = GridColoring(((0, F(1, 2), 1),), np.array([1, 2]), 2)
    doc = json.loads(serialize.dumps(solve_continuous_1d(c, q=2, t=1, certify=True, gamma=F(2, 3)).certificate))
    doc["certificate"]["runs"][0][1] = "1/3"
    with pytest.raises(InputError):
        serialize.from_json(doc)


def test_cube_pair_roundtrip(ab_line):
    assert roundtrip(find_equal_cubes(ab_line, sigma=F(1, 5))) == find_equal_cubes(ab_line, sigma=F(1, 5))


def test_reports():
    doc = serialize.report("subset-count", {"splittable": 2}, d=1, q=2)
    assert serialize.loads(serialize.dumps(doc)) == doc
    with pytest.raises(InputError):
        serialize.report("nonsense", {})


@pytest.mark.parametrize("doc", [
    {"format": "other", "version": 1, "kind": "grid"},
    {"format": "necklace-lab", "version": 99, "kind": "grid"},
    {"format": "necklace-lab", "version": 1, "kind": "mystery"},
])
def test_bad_documents(doc):
    with pytest.raises(InputError):
        serialize.from_json(doc)


def test_floats_rejected():
    doc = json.loads(serialize.dumps(GridColoring(((0, F(1, 2), 1),), np.array([1, 2]), 2)))
    doc["breakpoints"][0][1] = 0.5
    with pytest.raises((InputError, TypeError)):
        serialize.from_json(doc)
