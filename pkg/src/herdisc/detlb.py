"""The determinant lower bound: exact search, greedy witnesses and the union lemma harness.

All comparisons between candidate witnesses of different sizes are exact:
|d1|^(1/k1) > |d2|^(1/k2) is decided as |d1|^k2 > |d2|^k1 over Python ints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import InvalidInput, BudgetExceeded
from .exactla import (DEFAULT_MINOR_BUDGET, blockwise_squared_terms, int_det,
                      int_rows, mask_to_cols, minor_levels, submatrix)

# rational lower bound for e, so that "<= (e t)^k" checks stay exact
E_LOWER = Fraction(2718281828459045, 10**15)


class NoWitness(ValueError):
    """Every square submatrix is singular (e.g. the zero matrix)."""


@dataclass(frozen=True)
class DetlbWitness:
    rows: tuple[int, ...]   # 0-based row indices
    cols: tuple[int, ...]   # 0-based column indices
    det: int
    certified: bool = True  # False: a valid lower bound whose optimality is unproven

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def value_log(self) -> float:
        return math.log(abs(self.det)) / self.k

    @property
    def value(self) -> float:
        return math.exp(self.value_log)

    def verify(self, A) -> bool:
        if len(self.rows) != len(self.cols) or not self.rows or self.det == 0:
            return False
        return int_det(submatrix(A, self.rows, self.cols)) == self.det


def beats(d1: int, k1: int, d2: int, k2: int) -> bool:
    """|d1|^(1/k1) > |d2|^(1/k2), decided exactly."""
    return abs(d1) ** k2 > abs(d2) ** k1


def at_most_power(d: int, k: int, x2: Fraction | int) -> bool:
    """|d|^(1/k) <= sqrt(x2), decided exactly (x2 rational)."""
    x2 = Fraction(x2)
    return d * d * x2.denominator ** k <= x2.numerator ** k


def detlb_exact(A, budget: int = DEFAULT_MINOR_BUDGET) -> DetlbWitness:
    """Witness maximizing |det B|^(1/k) over every square submatrix B of A.

    Ties (exactly equal values) go to the smaller k, then to the
    lexicographically smallest (rows, cols). If the minor budget runs out the
    best witness among the completed sizes is returned with
    ``certified=False``.
    """
    M = int_rows(A)
    m = len(M)
    n = len(M[0]) if m else 0
    transpose = n > m
    work = [list(r) for r in zip(*M)] if transpose else M
    best: DetlbWitness | None = None
    certified = True
    try:
        for k, row_sets, vals in minor_levels(work, budget=budget):
            absvals = np.abs(vals)
            top = absvals.max()
            if top == 0:
                continue
            cands = []
            for r, S in zip(*np.nonzero(absvals == top)):
                R, C = row_sets[r], mask_to_cols(int(S))
                if transpose:
                    R, C = C, R
                cands.append((R, C, int(vals[r, S])))
            R, C, d = min(cands)
            if best is None or beats(d, k, best.det, best.k):
                best = DetlbWitness(R, C, d)
    except BudgetExceeded:
        certified = False
    if best is None:
        if certified:
            raise NoWitness("all square submatrices are singular")
        raise BudgetExceeded("budget exhausted before any nonsingular minor was found")
    if not certified:
        best = DetlbWitness(best.rows, best.cols, best.det, certified=False)
    return best


def detlb_bruteforce(A) -> tuple[int, int]:
    """(|det|, k) of the best witness by plain enumeration with int_det; test oracle."""
    M = int_rows(A)
    m, n = len(M), len(M[0])
    best = None
    for k in range(1, min(m, n) + 1):
        for R in combinations(range(m), k):
            for C in combinations(range(n), k):
                d = abs(int_det([[M[i][j] for j in C] for i in R]))
                if d and (best is None or beats(d, k, best[0], best[1])):
                    best = (d, k)
    if best is None:
        raise NoWitness("all square submatrices are singular")
    return best


def detlb_greedy(A, k: int) -> DetlbWitness:
    """Greedy volume growth: repeatedly add the (row, col) pair maximizing the new |minor|.

    Lowest (row, col) wins ties. Returns the largest nonsingular witness
    reached (smaller than k when no nonsingular extension exists). Always a
    valid lower bound on detlb, never claimed optimal.
    """
    M = int_rows(A)
    m = len(M)
    n = len(M[0]) if m else 0
    if not 1 <= k <= min(m, n):
        raise InvalidInput(f"target size {k} outside [1, {min(m, n)}]")
    rows: list[int] = []
    cols: list[int] = []
    det = 1
    for _ in range(k):
        choice = None
        for r in range(m):
            if r in rows:
                continue
            for c in range(n):
                if c in cols:
                    continue
                R, C = sorted(rows + [r]), sorted(cols + [c])
                d = int_det([[M[i][j] for j in C] for i in R])
                if d and (choice is None or abs(d) > abs(choice[2])):
                    choice = (r, c, d)
        if choice is None:
            break
        rows.append(choice[0])
        cols.append(choice[1])
        det = choice[2]
    if not rows:
        raise NoWitness("matrix is zero")
    return DetlbWitness(tuple(sorted(rows)), tuple(sorted(cols)), det, certified=False)


def hadamard_upper_bound_sq(A) -> int:
    """Exact integer U with detlb(A)^2 <= U: the smaller of the largest squared row and column norms."""
    M = int_rows(A)
    if not M or not M[0]:
        return 0
    row = max(sum(x * x for x in r) for r in M)
    col = max(sum(x * x for x in c) for c in zip(*M))
    return min(row, col)


def binomial_product(k: int, sizes: Sequence[int]) -> int:
    return math.prod(math.comb(k, s) for s in sizes)


def binomial_estimate_holds(k: int, sizes: Sequence[int]) -> bool:
    """prod_l C(k, k_l) <= (e t)^k, exact via a rational lower bound on e."""
    t = len(sizes)
    lhs = binomial_product(k, sizes)
    return lhs <= (E_LOWER * t) ** k


@dataclass
class UnionReport:
    k: int
    block_sizes: list[int]
    det: int
    bound_sq: int              # U^2 = prod_l sum_J det(B[I_l, J])^2
    part_witnesses: list[DetlbWitness]
    D_det: int                 # D = |D_det|^(1/D_k)
    D_k: int
    binom: int                 # prod_l C(k, k_l)
    links: dict[str, bool] = field(default_factory=dict)
    slacks: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.links.values())

    @property
    def D(self) -> float:
        return abs(self.D_det) ** (1.0 / self.D_k)


def union_bound_check(parts: Sequence, rows: Sequence[tuple[int, int]], cols: Sequence[int],
                      budget: int = DEFAULT_MINOR_BUDGET) -> UnionReport:
    """Check |det B| <= U <= D^k sqrt(prod C(k, k_l)) <= (D sqrt(e t))^k for a square B.

    ``rows`` lists (part, row) pairs, both 0-based, selecting B's rows from
    the parts; ``cols`` are 0-based column indices. D is the largest exact
    detlb over the parts. Each link is decided exactly; ``slacks`` holds the
    natural-log margin of each link for reporting.
    """
    mats = [int_rows(P) for P in parts]
    if not mats:
        raise InvalidInput("need at least one part")
    ncols = {len(M[0]) for M in mats if M}
    if len(ncols) != 1:
        raise InvalidInput("parts must share the column count")
    k = len(rows)
    if k == 0 or k != len(cols):
        raise InvalidInput("B must be square and non-empty")
    B = [[mats[p][r][c] for c in cols] for p, r in rows]
    blocks = [[i for i, (p, _) in enumerate(rows) if p == ell] for ell in range(len(mats))]
    sizes = [len(b) for b in blocks]
    det = int_det(B)
    terms = blockwise_squared_terms(B, blocks, budget)
    bound_sq = math.prod(terms)

    wits = []
    for M in mats:
        try:
            wits.append(detlb_exact(M, budget))
        except NoWitness:
            wits.append(None)
    real = [w for w in wits if w is not None]
    if any(not w.certified for w in real):
        raise BudgetExceeded("part detlb not resolved within budget")
    if real:
        top = real[0]
        for w in real[1:]:
            if beats(w.det, w.k, top.det, top.k):
                top = w
        D_det, D_k = abs(top.det), top.k
    else:
        D_det, D_k = 0, 1
    binom = binomial_product(k, sizes)
    t = len(mats)

    # link 2: U^2 <= D^(2k) * binom   <=>   (U^2)^D_k <= D_det^(2k) * binom^D_k
    links = {
        "det_le_blockwise": det * det <= bound_sq,
        "blockwise_le_detlb_binomial": bound_sq ** D_k <= D_det ** (2 * k) * binom ** D_k,
        "binomial_le_et": binomial_estimate_holds(k, sizes),
    }

    def ln(x):
        return math.log(x) if x > 0 else -math.inf

    lnD = ln(D_det) / D_k if D_det else -math.inf
    slacks = {
        "det_le_blockwise": 0.5 * ln(bound_sq) - ln(abs(det)),
        "blockwise_le_detlb_binomial": k * lnD + 0.5 * ln(binom) - 0.5 * ln(bound_sq),
        "binomial_le_et": k * math.log(math.e * t) - ln(binom),
    }
    return UnionReport(k, sizes, det, bound_sq, wits, D_det, D_k, binom, links, slacks)


def union_lemma_holds(union_witness: DetlbWitness, part_witnesses: Sequence[DetlbWitness]) -> bool:
    """detlb(union) <= sqrt(e t) * max_l detlb(A_l), decided exactly from exact witnesses.

    With D = |d_D|^(1/k_D) and union witness det d over k: need
    d^(2 k_D) <= d_D^(2k) * (e t)^(k k_D); e is replaced by a rational lower bound.
    """
    t = len(part_witnesses)
    top = part_witnesses[0]
    for w in part_witnesses[1:]:
        if beats(w.det, w.k, top.det, top.k):
            top = w
    d, k = abs(union_witness.det), union_witness.k
    dD, kD = abs(top.det), top.k
    et = E_LOWER * t
    rhs = Fraction(dD ** (2 * k)) * et ** (k * kD)
    return d ** (2 * kD) <= rhs
