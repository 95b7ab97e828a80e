"""Exact integer determinants, minor enumeration and the blockwise determinant bound.

Integer matrices are taken as anything convertible to a 2-D array of
integers (nested lists, numpy int arrays). All determinant arithmetic on them
is done with arbitrary-precision Python ints; floating point only enters in
the symmetric eigenvalue routines and in the final square root of
:func:`blockwise_det_bound`.
"""
from __future__ import annotations

import math
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .core import BudgetExceeded, InvalidInput

DEFAULT_MINOR_BUDGET = 2_000_000


def int_rows(B) -> list[list[int]]:
    """Copy of B as a list of lists of Python ints; rejects non-integers."""
    arr = np.asarray(B, dtype=object)
    if arr.ndim != 2:
        raise InvalidInput(f"expected a 2-D matrix, got {arr.ndim}-D")
    rows = []
    for row in arr.tolist():
        out = []
        for x in row:
            if isinstance(x, (bool, np.bool_)):
                x = int(x)
            if isinstance(x, float) and x.is_integer():
                x = int(x)
            if not isinstance(x, (int, np.integer)):
                raise InvalidInput(f"non-integer entry {x!r}")
            out.append(int(x))
        rows.append(out)
    return rows


def int_det(B) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    M = int_rows(B)
    k = len(M)
    if k == 0 or any(len(r) != k for r in M):
        raise InvalidInput("int_det needs a non-empty square matrix")
    sign, prev = 1, 1
    for p in range(k - 1):
        if M[p][p] == 0:
            for r in range(p + 1, k):
                if M[r][p] != 0:
                    M[p], M[r] = M[r], M[p]
                    sign = -sign
                    break
            else:
                return 0
        piv = M[p][p]
        for r in range(p + 1, k):
            Mr, Mp = M[r], M[p]
            f = Mr[p]
            for c in range(p + 1, k):
                Mr[c] = (piv * Mr[c] - f * Mp[c]) // prev
            Mr[p] = 0
        prev = piv
    return sign * M[k - 1][k - 1]


def submatrix(B, rows: Sequence[int], cols: Sequence[int]) -> list[list[int]]:
    M = int_rows(B)
    return [[M[i][j] for j in cols] for i in rows]


def gram_det(C) -> int:
    """det(C^T C) exactly; zero when C has more columns than rows is still computed."""
    M = int_rows(C)
    if not M:
        raise InvalidInput("empty matrix")
    k = len(M[0])
    G = [[sum(r[a] * r[b] for r in M) for b in range(k)] for a in range(k)]
    return int_det(G)


def _check_partition(P: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    blocks = [sorted(int(i) for i in b) for b in P]
    seen = sorted(i for b in blocks for i in b)
    if seen != list(range(k)):
        raise InvalidInput(f"row blocks must partition 0..{k - 1}")
    return blocks


def blockwise_squared_terms(B, P: Sequence[Sequence[int]],
                            budget: int = DEFAULT_MINOR_BUDGET) -> list[int]:
    """For each row block I, the exact sum over column sets J with |J| = |I| of det(B[I, J])^2.

    Rows are 0-based. An empty block contributes 1.
    """
    M = int_rows(B)
    k = len(M)
    if any(len(r) != k for r in M):
        raise InvalidInput("blockwise bound needs a square matrix")
    blocks = _check_partition(P, k)
    cost = sum(math.comb(k, len(b)) for b in blocks)
    if cost > budget:
        raise BudgetExceeded(f"{cost} minors exceed budget {budget}")
    terms = []
    for b in blocks:
        if not b:
            terms.append(1)
            continue
        s = 0
        for J in combinations(range(k), len(b)):
            d = int_det([[M[i][j] for j in J] for i in b])
            s += d * d
        terms.append(s)
    return terms


def blockwise_det_bound_squared(B, P, budget: int = DEFAULT_MINOR_BUDGET) -> int:
    return math.prod(blockwise_squared_terms(B, P, budget))


def blockwise_det_bound(B, P, budget: int = DEFAULT_MINOR_BUDGET) -> float:
    """Upper bound on |det B| from Gram-Schmidt within row blocks and Hadamard across them.

    Equals |det B| for a single block and the product of row norms for
    all-singleton blocks.
    """
    return _sqrt_int(blockwise_det_bound_squared(B, P, budget))


def _sqrt_int(x: int) -> float:
    r = math.isqrt(x)
    if r * r == x:
        return float(r)
    if x < 2**1000:
        return math.sqrt(x)
    return math.exp(0.5 * math.log(x))


def as_symmetric(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {S.shape}")
    return S


def min_eigenvalue(S) -> float:
    S = as_symmetric(S)
    if S.shape[0] == 0:
        return math.inf
    return float(np.linalg.eigvalsh(0.5 * (S + S.T))[0])


def psd_check(S, tol: float = 0.0) -> bool:
    if tol < 0:
        raise InvalidInput("tol must be nonnegative")
    return min_eigenvalue(S) >= -tol


# exact minor enumeration ---------------------------------------------------

def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    count = np.zeros_like(x)
    while x.any():
        count += x & 1
        x >>= 1
    return count


def _hadamard_safe(M: np.ndarray) -> bool:
    """True when every minor and partial Laplace sum of M fits comfortably in int64."""
    norms = np.sqrt((M.astype(float) ** 2).sum(axis=1))
    k = min(M.shape)
    top = np.sort(np.maximum(norms, 1.0))[::-1][:k]
    bound = float(np.prod(top)) * max(1, M.shape[1]) * max(1.0, float(np.abs(M).max(initial=0)))
    return bound < 2.0**60


def minor_levels(A, kmax: int | None = None,
                 budget: int = DEFAULT_MINOR_BUDGET) -> Iterator[tuple[int, list[tuple[int, ...]], np.ndarray]]:
    """Yield (k, row_sets, values) for k = 1, 2, ... holding every k x k minor of A.

    ``values[r, S]`` is det A[row_sets[r], cols(S)] where S is a column bitmask
    with popcount k (entries at other popcounts are zero). Row sets spanning a
    rank-deficient block are dropped, since every extension of them is
    singular too. Raises BudgetExceeded once the cells touched would exceed
    ``budget``; levels already yielded are complete.
    """
    M = np.array(int_rows(A), dtype=object)
    m, n = M.shape if M.size else (len(M), 0)
    if m == 0 or n == 0:
        return
    kmax = min(m, n) if kmax is None else min(kmax, m, n)
    dtype = np.int64 if _hadamard_safe(M) else object
    Mi = M.astype(dtype)
    N = 1 << n
    S = np.arange(N, dtype=np.int64)
    pc = _popcount(S)
    with_c, flipped, below = [], [], []
    for c in range(n):
        idx = np.nonzero((S >> c) & 1)[0]
        with_c.append(idx)
        flipped.append(idx ^ (1 << c))
        below.append(pc[idx & ((1 << c) - 1)])

    row_sets: list[tuple[int, ...]] = [()]
    lasts = np.array([-1])
    vals = np.zeros((1, N), dtype=dtype)
    vals[0, 0] = 1
    used = 0
    for j in range(kmax):
        new_sets, blocks = [], []
        for r in range(m):
            P = np.nonzero(lasts < r)[0]
            if P.size == 0:
                continue
            if used + P.size * N > budget:
                raise BudgetExceeded(f"minor enumeration at size {j + 1} exceeds budget {budget}")
            parent = vals[P]
            child = np.zeros((P.size, N), dtype=dtype)
            for c in range(n):
                a = Mi[r, c]
                if a == 0:
                    continue
                sign = np.where((j + below[c]) % 2 == 0, 1, -1).astype(dtype)
                child[:, with_c[c]] += (a * sign) * parent[:, flipped[c]]
            keep = np.nonzero((child != 0).any(axis=1))[0]
            used += P.size * N
            if keep.size:
                blocks.append(child[keep])
                new_sets.extend(row_sets[P[i]] + (r,) for i in keep)
        if not new_sets:
            return
        row_sets = new_sets
        lasts = np.array([rs[-1] for rs in row_sets])
        vals = np.concatenate(blocks, axis=0)
        yield j + 1, row_sets, vals


def mask_to_cols(mask: int) -> tuple[int, ...]:
    return tuple(c for c in range(mask.bit_length()) if (mask >> c) & 1)
