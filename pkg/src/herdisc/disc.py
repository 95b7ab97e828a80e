"""Exact discrepancy and hereditary discrepancy by exhaustive search."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import InvalidInput, SetSystem, coloring_discrepancy, restrict

DEFAULT_NODE_BUDGET = 50_000_000


@dataclass(frozen=True)
class DiscResult:
    value: int
    coloring: tuple[int, ...]
    nodes_explored: int
    certified: bool = True


@dataclass(frozen=True)
class HerdiscResult:
    value: int
    subset: tuple[int, ...]
    nodes_explored: int
    certified: bool = True


def disc_exact(F: SetSystem, budget: int = DEFAULT_NODE_BUDGET) -> DiscResult:
    """Minimum discrepancy over all +-1 colorings, with a lexicographically first optimal coloring.

    Depth-first over elements 1..n, +1 before -1. A partial coloring is cut
    once some set's partial sum cannot get back below the incumbent, i.e.
    |partial sum| - (uncolored elements of the set) >= incumbent. The search
    stops early when the incumbent meets the parity bound (1 if some set has
    odd size, else 0).

    If the node budget runs out, the best coloring found so far is returned
    with ``certified=False``.
    """
    if budget <= 0:
        raise InvalidInput("budget must be positive")
    n = F.n
    member = [[] for _ in range(n)]
    for i, s in enumerate(F.sets):
        for j in s:
            member[j - 1].append(i)
    sums = [0] * F.m
    left = [len(s) for s in F.sets]
    floor = 1 if any(len(s) % 2 for s in F.sets) else 0

    best = F.max_set_size() + 1
    best_chi: list[int] | None = None
    chi = [0] * n
    nodes = 0
    done = False

    def feasible(j: int) -> bool:
        for i in member[j]:
            if abs(sums[i]) - left[i] >= best:
                return False
        return True

    def dfs(j: int) -> None:
        nonlocal best, best_chi, nodes, done
        if j == n:
            val = max((abs(x) for x in sums), default=0)
            if val < best:
                best, best_chi = val, chi.copy()
                if best <= floor:
                    done = True
            return
        for c in (1, -1):
            if done or nodes >= budget:
                return
            nodes += 1
            chi[j] = c
            for i in member[j]:
                sums[i] += c
                left[i] -= 1
            if feasible(j):
                dfs(j + 1)
            for i in member[j]:
                sums[i] -= c
                left[i] += 1

    if n == 0:
        return DiscResult(0, (), 0)
    dfs(0)
    certified = done or nodes < budget
    if best_chi is None:
        best_chi = [1] * n
        best = coloring_discrepancy(F, best_chi)
    return DiscResult(best, tuple(best_chi), nodes, certified)


def disc_bruteforce(F: SetSystem) -> int:
    """Plain enumeration of all 2^n colorings; an oracle for small n."""
    if F.n == 0 or F.m == 0:
        return 0
    A = F.incidence()
    signs = 1 - 2 * ((np.arange(1 << F.n)[:, None] >> np.arange(F.n)) & 1)
    return int(np.abs(signs @ A.T).max(axis=1).min())


def herdisc_exact(F: SetSystem, budget: int = DEFAULT_NODE_BUDGET) -> HerdiscResult:
    """max over J of disc(F|_J), with the first maximizing J in enumeration order.

    Subsets are visited by decreasing size, lexicographically within a size.
    J is skipped when no set meets it in more than the current best number of
    elements, and the search ends once the best reaches the largest set size.
    On budget exhaustion the value is a lower bound and ``certified=False``.
    """
    n = F.n
    cap = F.max_set_size()
    best, best_J = 0, ()
    nodes = 0
    masks = [sum(1 << (j - 1) for j in s) for s in F.sets]
    for size in range(n, 0, -1):
        if best >= min(cap, size):
            break
        for J in combinations(range(1, n + 1), size):
            jm = sum(1 << (j - 1) for j in J)
            if max((bin(mk & jm).count("1") for mk in masks), default=0) <= best:
                continue
            r = disc_exact(restrict(F, J), budget=max(1, budget - nodes))
            nodes += r.nodes_explored
            if r.value > best and r.certified:
                best, best_J = r.value, J
            if not r.certified or nodes >= budget:
                return HerdiscResult(best, best_J, nodes, certified=False)
            if best >= cap:
                return HerdiscResult(best, best_J, nodes)
    return HerdiscResult(best, best_J, nodes)


def herdisc_sampled(F: SetSystem, samples: int, seed: int = 0,
                    budget: int = DEFAULT_NODE_BUDGET) -> HerdiscResult:
    """Certified lower bound on herdisc from J = [n] plus random subsets.

    Each sampled J keeps every element independently with probability 1/2.
    Subproblems that exhaust the budget are ignored; the returned bound only
    uses certified discrepancy values.
    """
    if samples < 1:
        raise InvalidInput("samples must be >= 1")
    rng = np.random.default_rng(seed)
    full = tuple(range(1, F.n + 1))
    best, best_J, nodes = 0, (), 0
    for s in range(samples):
        if s == 0:
            J = full
        else:
            J = tuple(int(j) + 1 for j in np.nonzero(rng.random(F.n) < 0.5)[0])
        r = disc_exact(restrict(F, J), budget=budget)
        nodes += r.nodes_explored
        if r.certified and r.value > best:
            best, best_J = r.value, J
    return HerdiscResult(best, best_J, nodes, certified=False)
