import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from necklace_lab.core import DiscreteNecklace
from necklace_lab.discrete_bounds import (
    compose_multicolor_hard_instance,
    count_splittable_subsets,
    counting_bound_report,
    fair_sets_for_sizes,
    find_hard_subset,
    min_cuts_subset,
    report_rows,
    splittable_mask,
)
from necklace_lab.errors import InputError
from necklace_lab.multidim import min_cuts_discrete_md, split_via_lift


def brute_splittable(n, d, q, t):
    """Independent oracle: every subset against every cut set and every labeling."""
    cells = list(itertools.product(range(n), repeat=d))
    cuts = [(a, p) for a in range(d) for p in range(1, n)]
    count = 0
    for bits in range(1 << len(cells)):
        chosen = [c for i, c in enumerate(cells) if bits >> i & 1]
        ok = False
        for size in range(t + 1):
            for combo in itertools.combinations(cuts, size):
                def piece(c):
                    return tuple(sum(1 for a, p in combo if a == ax and c[ax] >= p) for ax in range(d))
                keys = sorted({piece(c) for c in cells})
                for lab in itertools.product(range(q), repeat=len(keys)):
                    parts = [0] * q
                    for c in chosen:
                        parts[lab[keys.index(piece(c))]] += 1
                    if len(set(parts)) == 1:
                        ok = True
                        break
                if ok:
                    break
            if ok:
                break
        count += ok
    return count


def test_count_examples():
    assert count_splittable_subsets(2, 1, 2, 1).splittable == 2
    assert count_splittable_subsets(2, 1, 2, 0).splittable == 1
    c = count_splittable_subsets(3, 2, 2, 1)
    assert c.splittable == 208 < c.divisible == 256 and c.total == 512


@pytest.mark.parametrize("n, d, q, t", [(3, 1, 2, 1), (4, 1, 2, 2), (4, 1, 3, 2), (2, 2, 2, 1), (2, 2, 2, 2), (2, 3, 2, 1)])
def test_count_matches_brute_force(n, d, q, t):
    assert count_splittable_subsets(n, d, q, t).splittable == brute_splittable(n, d, q, t)


def test_count_is_monotone_in_t():
    counts = [count_splittable_subsets(3, 2, 2, t).splittable for t in range(5)]
    assert counts == sorted(counts)
    assert counts[-1] == count_splittable_subsets(3, 2, 2, 4).divisible


def test_size_guard():
    with pytest.raises(InputError):
        splittable_mask(5, 2, 2, 1)


@pytest.mark.parametrize("n, d, q, t", [(2, 1, 2, 1), (3, 1, 2, 1), (4, 1, 3, 2), (2, 2, 2, 1), (3, 2, 2, 1), (3, 2, 3, 2), (4, 2, 2, 1)])
def test_estimate_dominates_counts(n, d, q, t):
    b = counting_bound_report(n, d, q, t)
    assert b.estimate == (d * n) ** t * q ** ((t + 1) ** d) * b.max_fair_sets
    assert count_splittable_subsets(n, d, q, t).splittable <= b.estimate


@given(st.integers(0, 12), st.integers(0, 12))
def test_vandermonde(a, b):
    assert fair_sets_for_sizes((a, b)) == math.comb(a + b, a)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("cells", range(1, 13))
def test_balanced_split_maximises(cells, q):
    b = counting_bound_report(cells, 1, q, 0)
    best = max(fair_sets_for_sizes(a) for a in itertools.product(range(cells + 1), repeat=q) if sum(a) == cells)
    assert b.max_fair_sets == best and b.balanced_is_max


def test_one_dimensional_estimate_exceeds_total():
    for n in (4, 8, 12):
        b = counting_bound_report(n, 1, 2, 3)
        assert not b.estimate_below_total


def test_hard_subsets():
    h = find_hard_subset(2, 1, 2)
    assert h.cells == frozenset({(1,), (2,)}) and h.min_cuts == 1 == h.target
    h2 = find_hard_subset(3, 2, 2)
    assert h2.min_cuts >= 2 and len(h2.cells) % 2 == 0
    assert h2.cells == frozenset({(1, 1), (1, 2), (1, 3), (2, 2)})
    assert min_cuts_subset(np.zeros((2,), dtype=int), 2) == 0
    assert find_hard_subset(3, 1, 3).target == 2  # ceil(3/2)


def test_compose_examples():
    big = compose_multicolor_hard_instance(np.array([1, 1]), 3, 2)
    assert big.cells.tolist() == [2, 2, 3, 3]
    assert min_cuts_discrete_md(big).t_min >= 2
    h = find_hard_subset(3, 2, 2)
    # a single copy in a 3x3 cube leaves an odd number of colour-1 cells
    with pytest.raises(InputError):
        compose_multicolor_hard_instance(h, 2, 2)
    two = compose_multicolor_hard_instance(h, 3, 2)
    assert two.color_counts() == (28, 4, 4)
    assert min_cuts_discrete_md(two).t_min == 4  # d (k-1) q / 2


@pytest.mark.parametrize("k", [2, 3])
def test_composition_properties(k):
    n0 = np.array([[1, 0], [0, 1]])
    big = compose_multicolor_hard_instance(n0, k, 2)
    assert big.sides == (2 * (k - 1),) * 2
    assert all(c % 2 == 0 for c in big.color_counts())
    one = min_cuts_subset(n0, 2)
    m = min_cuts_discrete_md(big).t_min
    assert m >= one
    assert split_via_lift(big).t <= (2 * big.d - 1) * big.k * (big.q - 1)


def test_compose_rejects_indivisible():
    with pytest.raises(InputError):
        compose_multicolor_hard_instance(np.array([1, 0]), 2, 2)
    with pytest.raises(InputError):
        compose_multicolor_hard_instance(np.array([1, 1, 0]), 2, 2)  # colour 1 would be odd


def test_report_rows():
    rows = report_rows([(2, 1, 2, 1), (3, 2, 2, 1)])
    assert [r["splittable"] for r in rows] == [2, 208]
    assert all(r["estimate_dominates"] for r in rows)
