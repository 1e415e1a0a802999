from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from necklace_lab.exact import det, fmt_rat, rank, rat, rref, solve_square
from necklace_lab.lp import Farkas, LinearSystem, SystemBuilder, feasible, solve_lp, verify_farkas

small = st.integers(-4, 4)


def test_rat_and_format():
    assert rat("3/6") == F(1, 2)
    assert fmt_rat(F(4)) == "4/1"
    assert fmt_rat(F(-1, 3)) == "-1/3"
    with pytest.raises(TypeError):
        rat(0.5)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_and_rank_match_numpy(rows):
    A = np.array(rows, dtype=float)
    assert float(det([[F(x) for x in r] for r in rows])) == pytest.approx(np.linalg.det(A), abs=1e-9)
    assert rank([[F(x) for x in r] for r in rows]) == np.linalg.matrix_rank(A)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4))
def test_rref_tracks_row_operations(rows):
    M = [[F(x) for x in r] for r in rows]
    R, piv, E = rref(M, track=True)
    for i, row in enumerate(R):
        assert [sum(E[i][k] * M[k][j] for k in range(len(M))) for j in range(4)] == row
    for i, p in enumerate(piv):
        assert R[i][p] == 1 and all(R[j][p] == 0 for j in range(len(R)) if j != i)


def test_solve_square_singular():
    assert solve_square([[F(1), F(2)], [F(2), F(4)]], [F(1), F(2)]) is None
    assert solve_square([[F(2), F(0)], [F(0), F(4)]], [F(1), F(1)]) == [F(1, 2), F(1, 4)]


def test_simple_feasible_and_infeasible():
    b = SystemBuilder(2)
    b.ge({0: 1}, 0)
    b.ge({1: 1}, 0)
    b.le({0: 1, 1: 1}, 1)
    res = solve_lp(b.build(), [1, 2])
    assert res.status == "optimal" and res.value == 2 and res.x == (0, 1)
    b.ge({0: 1, 1: 1}, 2)
    bad = feasible(b.build())
    assert bad.status == "infeasible" and verify_farkas(b.build(), bad.farkas)


def test_equality_contradiction_certificate():
    b = SystemBuilder(2)
    b.eq({0: 1, 1: 1}, 1)
    b.eq({0: 2, 1: 2}, 3)
    res = feasible(b.build())
    assert res.status == "infeasible" and verify_farkas(b.build(), res.farkas)


def test_unbounded_reported():
    b = SystemBuilder(1)
    b.ge({0: 1}, 0)
    assert solve_lp(b.build(), [1]).status == "unbounded"


def test_verify_farkas_rejects_bogus():
    b = SystemBuilder(1)
    b.le({0: 1}, 1)
    b.ge({0: 1}, 0)
    sys_ = b.build()
    assert not verify_farkas(sys_, Farkas((F(1), F(1)), ()))
    assert not verify_farkas(sys_, Farkas((F(-1), F(0)), ()))
    assert not verify_farkas(sys_, Farkas((F(1),), ()))


@st.composite
def systems(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 5))
    e = draw(st.integers(0, 2))
    A = [[F(draw(small)) for _ in range(n)] for _ in range(m)]
    b = [F(draw(st.integers(-6, 6))) for _ in range(m)]
    Ae = [[F(draw(small)) for _ in range(n)] for _ in range(e)]
    be = [F(draw(st.integers(-3, 3))) for _ in range(e)]
    # box rows keep everything bounded so the oracle and the solver agree on optima
    for j in range(n):
        for s in (1, -1):
            A.append([F(s) if i == j else F(0) for i in range(n)])
            b.append(F(10))
    c = [F(draw(small)) for _ in range(n)]
    return LinearSystem(n, tuple(map(tuple, A)), tuple(b), tuple(map(tuple, Ae)), tuple(be)), c


@given(systems())
def test_agrees_with_linprog(case):
    system, c = case
    ours = solve_lp(system, c, maximize=True)
    ref = linprog(
        [-float(x) for x in c],
        A_ub=np.array(system.A_ub, dtype=float), b_ub=np.array(system.b_ub, dtype=float),
        A_eq=np.array(system.A_eq, dtype=float) if system.A_eq else None,
        b_eq=np.array(system.b_eq, dtype=float) if system.A_eq else None,
        bounds=[(None, None)] * system.nvars, method="highs",
    )
    if ref.status == 2:
        assert ours.status == "infeasible"
        assert verify_farkas(system, ours.farkas)
    else:
        assert ref.status == 0
        assert ours.status == "optimal"
        assert system.satisfied_by(ours.x)
        assert float(ours.value) == pytest.approx(-ref.fun, abs=1e-7)


def test_digest_is_stable():
    b = SystemBuilder(1, ("x",))
    b.le({0: 1}, F(1, 3))
    s = b.build()
    assert s.digest() == LinearSystem(1, ((F(1),),), (F(1, 3),), (), (), ("x",)).digest()
    assert s.to_json()["b_ub"] == ["1/3"]
