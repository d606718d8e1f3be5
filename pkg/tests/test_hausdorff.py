import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyfp.errors import DomainError
from fuzzyfp.fuzzy_metric import euclidean, standard_from_metric
from fuzzyfp.hausdorff import FiniteCompactSet, attaining_index, hausdorff_eval, point_to_set
from fuzzyfp.tnorm import PRODUCT
from oracles import classical_hausdorff, fuzzy_hausdorff_brute

R1 = standard_from_metric(euclidean(1))
R2 = standard_from_metric(euclidean(2))

pt2 = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).map(lambda p: (p[0] / 2, p[1] / 2))
sets2 = st.lists(pt2, min_size=1, max_size=5)


def test_set_dedup_and_order():
    S = FiniteCompactSet([[1.0], [3.0], [1.0], [2.0]])
    assert S.points.ravel().tolist() == [1.0, 3.0, 2.0]
    assert S.origins == (0, 1, 3)
    assert [3.0] in S and [4.0] not in S
    assert S == FiniteCompactSet([[2.0], [3.0], [1.0]])


def test_set_validation():
    with pytest.raises(DomainError):
        FiniteCompactSet([])
    with pytest.raises(DomainError):
        FiniteCompactSet([[0.0, 1.0], [1.0]])


def test_point_to_set_examples():
    B = FiniteCompactSet([[1.0], [3.0]])
    value, w = point_to_set(R1, [0.0], B, 1.0)
    # Exhaustive max over B: 1/(1+1) = 0.5 at 1, 1/(1+3) = 0.25 at 3.
    assert value == 0.5 and w.tolist() == [1.0]
    single = FiniteCompactSet([[7.0]])
    assert point_to_set(R1, [2.0], single, 0.3) == (R1.eval([2.0], [7.0], 0.3), single[0])
    value, w = point_to_set(R1, [3.0], B, 2.0)
    assert value == 1.0 and w.tolist() == [3.0]


def test_point_to_set_ties_go_to_lowest_index():
    B = FiniteCompactSet([[2.0], [-2.0]])
    assert attaining_index(R1, np.array([0.0]), B, 1.0) == (1 / 3, 0)
    B = FiniteCompactSet([[-2.0], [2.0]])
    assert point_to_set(R1, [0.0], B, 1.0)[1].tolist() == [-2.0]


def test_rho_must_be_positive():
    A = FiniteCompactSet([[0.0]])
    with pytest.raises(DomainError):
        hausdorff_eval(R1, A, A, 0.0)
    with pytest.raises(DomainError):
        point_to_set(R1, [0.0], A, -1.0)


def test_hausdorff_examples():
    a, b = FiniteCompactSet([[0.3]]), FiniteCompactSet([[-1.1]])
    assert hausdorff_eval(R1, a, b, 0.7) == R1.eval([0.3], [-1.1], 0.7)
    A = FiniteCompactSet([[0.0], [1.0]])
    B = FiniteCompactSet([[0.0], [2.0]])
    assert hausdorff_eval(R1, A, A, 1.0) == 1.0
    expected = fuzzy_hausdorff_brute([[0.0], [1.0]], [[0.0], [2.0]], 1.0)
    assert expected == 0.5
    assert hausdorff_eval(R1, A, B, 1.0) == expected


@settings(max_examples=200)
@given(A=sets2, B=sets2, rho=st.floats(0.01, 100))
def test_matches_classical_oracle_and_is_symmetric(A, B, rho):
    SA, SB = FiniteCompactSet(A), FiniteCompactSet(B)
    val = hausdorff_eval(R2, SA, SB, rho)
    assert val == hausdorff_eval(R2, SB, SA, rho)
    assert abs(val - rho / (rho + classical_hausdorff(A, B))) <= 1e-12


@given(A=sets2, B=sets2)
def test_value_one_iff_equal_sets(A, B):
    SA, SB = FiniteCompactSet(A), FiniteCompactSet(B)
    all_one = all(hausdorff_eval(R2, SA, SB, r) == 1.0 for r in (0.01, 1.0, 100.0))
    assert all_one == (SA == SB)


@given(A=sets2, B=sets2, r1=st.floats(0.01, 100), r2=st.floats(0.01, 100))
def test_monotone_in_rho(A, B, r1, r2):
    SA, SB = FiniteCompactSet(A), FiniteCompactSet(B)
    lo, hi = sorted((r1, r2))
    assert hausdorff_eval(R2, SA, SB, lo) <= hausdorff_eval(R2, SA, SB, hi)


@settings(max_examples=200)
@given(A=sets2, B=sets2, C=sets2, r=st.floats(0.01, 100), s=st.floats(0.01, 100))
def test_triangle_with_product(A, B, C, r, s):
    SA, SB, SC = map(FiniteCompactSet, (A, B, C))
    lhs = hausdorff_eval(R2, SA, SC, r + s)
    rhs = PRODUCT(hausdorff_eval(R2, SA, SB, r), hausdorff_eval(R2, SB, SC, s))
    assert lhs >= rhs - 1e-12


@given(u=pt2, B=sets2, rho=st.floats(0.01, 100))
def test_witness_attains_supremum(u, B, rho):
    SB = FiniteCompactSet(B)
    value, w = point_to_set(R2, u, SB, rho)
    assert w.tolist() in SB.points.tolist()
    assert value == R2.eval(u, w, rho)
    assert value == max(R2.eval(u, b, rho) for b in SB)
