"""Instance generators: Palvolgyi pairs, Hoffman trees, Sylvester-Hadamard matrices, random systems.

Color convention: red is +1, blue is -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import BudgetExceeded, InvalidInput, SetSystem, check_subset

MAX_GROUND = 1 << 16


@dataclass(frozen=True)
class PalvolgyiNode:
    """One step of the recursion on the ground-set interval [lo, hi] (1-based, inclusive)."""
    k: int
    l: int
    lo: int
    hi: int
    p: int | None = None                # distinguished element; None at a base case
    left: "PalvolgyiNode | None" = None     # on V' with parameters (k-1, l)
    right: "PalvolgyiNode | None" = None    # on V'' with parameters (k, l-1)


@dataclass(frozen=True)
class PalvolgyiPair:
    F1: SetSystem
    F2: SetSystem
    k: int
    l: int
    trace: PalvolgyiNode

    @property
    def n(self) -> int:
        return self.F1.n

    def union(self) -> SetSystem:
        from .core import union_tagged
        return union_tagged([self.F1, self.F2])


def palvolgyi_size(k: int, l: int) -> int:
    return math.comb(k + l, k) - 1


def _palvolgyi(k: int, l: int, lo: int):
    n = palvolgyi_size(k, l)
    V = list(range(lo, lo + n))
    if k == 1:
        return [[v] for v in V], [V], PalvolgyiNode(k, l, lo, lo + n - 1)
    if l == 1:
        return [V], [[v] for v in V], PalvolgyiNode(k, l, lo, lo + n - 1)
    n1 = palvolgyi_size(k - 1, l)
    n2 = palvolgyi_size(k, l - 1)
    F1a, F2a, left = _palvolgyi(k - 1, l, lo)
    F1b, F2b, right = _palvolgyi(k, l - 1, lo + n1)
    p = lo + n1 + n2
    F1 = [s + [p] for s in F1a] + F1b
    F2 = F2a + [s + [p] for s in F2b]
    return F1, F2, PalvolgyiNode(k, l, lo, p, p, left, right)


def palvolgyi(k: int, l: int, max_n: int = MAX_GROUND) -> PalvolgyiPair:
    """The pair (F1, F2) on n = C(k+l, k) - 1 points: F1 is k-uniform, F2 is l-uniform.

    Layout: V' takes the lowest labels, then V'', then p last.
    """
    if k < 1 or l < 1:
        raise InvalidInput("k and l must be >= 1")
    n = palvolgyi_size(k, l)
    if n > max_n:
        raise BudgetExceeded(f"ground set of size {n} exceeds {max_n}")
    F1, F2, trace = _palvolgyi(k, l, 1)
    return PalvolgyiPair(SetSystem(n, F1), SetSystem(n, F2), k, l, trace)


def _alternate(members: list[int]) -> dict[int, int]:
    return {v: (1 if i % 2 == 0 else -1) for i, v in enumerate(members)}


def _color(node: PalvolgyiNode, W: set[int], family: int) -> dict[int, int]:
    members = [v for v in range(node.lo, node.hi + 1) if v in W]
    # base cases: the family made of singletons gets all +1, the one-set family alternates
    if node.k == 1:
        return {v: 1 for v in members} if family == 1 else _alternate(members)
    if node.l == 1:
        return _alternate(members) if family == 1 else {v: 1 for v in members}
    left = _color(node.left, W, family)
    right = _color(node.right, W, family)
    chi = {**left, **right}
    if node.p in W:
        # the half whose sets gained p is flipped: V' for F1, V'' for F2
        for v in (left if family == 1 else right):
            chi[v] = -chi[v]
        chi[node.p] = 1
    return chi


def palvolgyi_coloring(pair: PalvolgyiPair, W: Iterable[int], family: int = 1) -> tuple[int, ...]:
    """A +-1 coloring of W (listed in increasing order) with chi(F & W) in {0, 1} for every F in the family.

    Inductively: color W & V' and W & V'' recursively, and when p is in W
    flip the half whose sets were extended by p and color p with +1. When p is
    not in W no flip is needed.
    """
    if family not in (1, 2):
        raise InvalidInput("family must be 1 or 2")
    W = check_subset(sorted(W), pair.n)
    chi = _color(pair.trace, set(W), family)
    return tuple(chi[v] for v in W)


def palvolgyi_colorings_all(pair: PalvolgyiPair, family: int = 1) -> np.ndarray:
    """The colorings of palvolgyi_coloring for all 2^n subsets at once.

    Row W (a bitmask, bit j-1 for element j) holds chi on every element,
    with 0 for elements outside W.
    """
    n = pair.n
    Wm = np.arange(1 << n, dtype=np.int64)
    inW = ((Wm[:, None] >> np.arange(n)) & 1).astype(np.int8)
    chi = np.zeros((1 << n, n), dtype=np.int8)

    def fill(node: PalvolgyiNode):
        cols = slice(node.lo - 1, node.hi)
        block = inW[:, cols]
        alt = np.where(np.cumsum(block, axis=1) % 2 == 1, 1, -1).astype(np.int8) * block
        if node.k == 1:
            chi[:, cols] = block if family == 1 else alt
            return
        if node.l == 1:
            chi[:, cols] = alt if family == 1 else block
            return
        fill(node.left)
        fill(node.right)
        flip = node.left if family == 1 else node.right
        fcols = slice(flip.lo - 1, flip.hi)
        pin = inW[:, node.p - 1]
        chi[:, fcols] *= (1 - 2 * pin)[:, None]
        chi[:, node.p - 1] = pin

    fill(pair.trace)
    return chi


def verify_mono_property(F1: SetSystem, F2: SetSystem, max_n: int = 26,
                         samples: int = 1 << 20, seed: int = 0) -> tuple[bool, bool]:
    """(holds, certified): every coloring has an all-red F1 set or an all-blue F2 set.

    Exhaustive over all 2^n colorings when n <= max_n, otherwise checked on
    ``samples`` random colorings and reported as not certified.
    """
    if F1.n != F2.n:
        raise InvalidInput("systems on different ground sets")
    n = F1.n
    m1 = [sum(1 << (j - 1) for j in s) for s in F1.sets]
    m2 = [sum(1 << (j - 1) for j in s) for s in F2.sets]
    certified = n <= max_n
    chunk = 1 << 20
    if certified:
        batches = (np.arange(a, min(a + chunk, 1 << n), dtype=np.int64)
                   for a in range(0, 1 << n, chunk))
    else:
        rng = np.random.default_rng(seed)
        batches = iter([rng.integers(0, 1 << n, size=samples, dtype=np.int64)])
    for red in batches:
        hit = np.zeros(red.size, dtype=bool)
        for s in m1:
            hit |= (red & s) == s
        for s in m2:
            hit |= (red & s) == 0
        if not hit.all():
            return False, True
    return True, certified


def hoffman_tree(k: int, max_n: int = MAX_GROUND) -> tuple[SetSystem, SetSystem]:
    """Edges of the complete k-ary tree of depth k, numbered in BFS order (children left to right).

    F1 holds the k^k root-to-leaf paths (leaves in BFS order); F2 holds, for
    each internal vertex in BFS order, its k child edges.
    """
    if k < 1:
        raise InvalidInput("k must be >= 1")
    n = sum(k ** i for i in range(1, k + 1))
    if n > max_n:
        raise BudgetExceeded(f"{n} edges exceed {max_n}")
    # vertex v > 0 in BFS order is reached by edge number v
    parent = [-1]
    depth = [0]
    children: list[list[int]] = [[]]
    frontier = [0]
    for _ in range(k):
        nxt = []
        for v in frontier:
            for _ in range(k):
                u = len(parent)
                parent.append(v)
                depth.append(depth[v] + 1)
                children.append([])
                children[v].append(u)
                nxt.append(u)
        frontier = nxt
    paths = []
    for leaf in frontier:
        path, v = [], leaf
        while v != 0:
            path.append(v)
            v = parent[v]
        paths.append(sorted(path))
    stars = [children[v] for v in range(len(parent)) if children[v]]
    return SetSystem(n, paths), SetSystem(n, stars)


def sylvester_hadamard(order: int) -> np.ndarray:
    if order < 1 or order & (order - 1):
        raise InvalidInput(f"order {order} is not a power of two")
    H = np.ones((1, 1), dtype=np.int64)
    while H.shape[0] < order:
        H = np.block([[H, H], [H, -H]])
    return H


def random_system(n: int, m: int, p: float, seed: int) -> SetSystem:
    """Each element joins each set independently with probability p (numpy PCG64 stream)."""
    if not 0 <= p <= 1:
        raise InvalidInput("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    A = rng.random((m, n)) < p
    return SetSystem(n, [list(np.nonzero(row)[0] + 1) for row in A])


def singletons(n: int) -> SetSystem:
    return SetSystem(n, [[j] for j in range(1, n + 1)])


def triangle() -> SetSystem:
    return SetSystem(3, [[1, 2], [2, 3], [1, 3]])
