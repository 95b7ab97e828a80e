import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from herdisc.core import BudgetExceeded, InvalidInput
from herdisc.exactla import (blockwise_det_bound, blockwise_det_bound_squared,
                             blockwise_squared_terms, gram_det, int_det, mask_to_cols,
                             min_eigenvalue, minor_levels, psd_check, submatrix)
from herdisc.generators import sylvester_hadamard

from conftest import int_matrices


def leibniz(M):
    """Permutation expansion: an oracle independent of elimination."""
    k = len(M)
    total = 0
    for perm in itertools.permutations(range(k)):
        inv = sum(perm[i] > perm[j] for i in range(k) for j in range(i + 1, k))
        total += (-1) ** inv * math.prod(M[i][perm[i]] for i in range(k))
    return total


def test_int_det_examples():
    assert int_det(np.eye(3, dtype=int)) == 1
    assert int_det([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert abs(int_det(sylvester_hadamard(4))) == 16
    assert int_det([[0, 1], [1, 0]]) == -1
    assert int_det([[0, 0], [1, 1]]) == 0
    with pytest.raises(InvalidInput):
        int_det([[1, 2, 3]])
    with pytest.raises(InvalidInput):
        int_det([[0.5]])


@given(int_matrices(max_rows=5, square=True, lo=-5, hi=5))
def test_int_det_matches_leibniz(B):
    assert int_det(B) == leibniz(B.tolist())


def test_int_det_big_entries_stay_exact():
    B = [[10**20, 1], [1, 10**20]]
    assert int_det(B) == 10**40 - 1


@given(st.integers(1, 6), st.integers(1, 4), st.data())
def test_binet_cauchy(m, k, data):
    flat = data.draw(st.lists(st.integers(-3, 3), min_size=m * k, max_size=m * k))
    C = np.array(flat).reshape(m, k)
    minors = sum(int_det(submatrix(C, I, range(k))) ** 2
                 for I in itertools.combinations(range(m), k))
    assert gram_det(C) == minors          # zero when m < k on both sides


def test_blockwise_examples():
    assert blockwise_det_bound(np.eye(2, dtype=int), [[0], [1]]) == 1.0
    H4 = sylvester_hadamard(4)
    assert blockwise_squared_terms(H4, [[0, 1], [2, 3]]) == [16, 16]
    assert blockwise_det_bound(H4, [[0, 1], [2, 3]]) == 16.0
    B = [[2, -1, 3], [0, 1, 1], [4, 2, -2]]
    assert blockwise_det_bound(B, [[0, 1], [2]]) >= abs(int_det(B))
    with pytest.raises(InvalidInput):
        blockwise_det_bound(B, [[0, 1]])
    with pytest.raises(BudgetExceeded):
        blockwise_det_bound(np.eye(10, dtype=int), [list(range(5)), list(range(5, 10))], budget=100)


@st.composite
def matrix_and_partition(draw):
    B = draw(int_matrices(max_rows=5, square=True))
    k = B.shape[0]
    labels = draw(st.lists(st.integers(0, k - 1), min_size=k, max_size=k))
    P = [[i for i in range(k) if labels[i] == b] for b in sorted(set(labels))]
    return B, P


@given(matrix_and_partition())
def test_blockwise_bounds_det(BP):
    B, P = BP
    k = B.shape[0]
    U2 = blockwise_det_bound_squared(B, P)
    assert int_det(B) ** 2 <= U2
    # each block term is the Gram determinant of that block's rows
    for b, term in zip(P, blockwise_squared_terms(B, P)):
        assert term == gram_det(B[b].T)
    # one block is exact; all singletons is the Hadamard product of row norms
    assert blockwise_det_bound_squared(B, [list(range(k))]) == int_det(B) ** 2
    rows_sq = math.prod(int(r @ r) for r in B)
    assert blockwise_det_bound_squared(B, [[i] for i in range(k)]) == rows_sq
    # coarsening never increases the bound (Fischer)
    if len(P) >= 2:
        merged = [P[0] + P[1]] + P[2:]
        assert blockwise_det_bound_squared(B, merged) <= U2


def test_eigen_examples():
    assert min_eigenvalue(np.diag([1.0, 2.0])) == pytest.approx(1.0)
    assert min_eigenvalue([[2, -1], [-1, 2]]) == pytest.approx(1.0)
    assert min_eigenvalue(np.eye(4) / 4) == pytest.approx(0.25)
    assert psd_check(np.zeros((3, 3)), 0.0)
    assert not psd_check(np.diag([1.0, -1.0]), 1e-9)
    assert psd_check(np.diag([1.0, -1e-12]), 1e-9)
    with pytest.raises(InvalidInput):
        min_eigenvalue(np.zeros((2, 3)))


@given(int_matrices(max_rows=5, max_cols=6))
def test_minor_levels_enumerates_every_minor(A):
    m, n = A.shape
    seen = {}
    for k, row_sets, vals in minor_levels(A):
        for r, R in enumerate(row_sets):
            for S in np.nonzero(vals[r])[0]:
                seen[(R, mask_to_cols(int(S)))] = int(vals[r, S])
    for k in range(1, min(m, n) + 1):
        for R in itertools.combinations(range(m), k):
            for C in itertools.combinations(range(n), k):
                d = int_det(submatrix(A, R, C))
                assert seen.get((R, C), 0) == d


def test_minor_levels_object_fallback():
    A = np.array([[3**30, 1], [1, 3**30]], dtype=object)
    levels = list(minor_levels(A))
    assert levels[-1][2][0, 3] == 3**60 - 1


def test_minor_levels_budget():
    with pytest.raises(BudgetExceeded):
        list(minor_levels(np.ones((6, 12), dtype=int), budget=1000))
