"""Set systems on the ground set {1..n}, restriction, tagged unions, colorings.

Ground-set elements are 1-based throughout. A set system is an ordered list
of rows; duplicate rows and empty rows are kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class InvalidInput(ValueError):
    """Raised when an argument violates an operation's precondition."""


class BudgetExceeded(RuntimeError):
    """Raised when a hard size budget is exceeded before any work is done."""


@dataclass(frozen=True)
class SetSystem:
    n: int
    sets: tuple[tuple[int, ...], ...]
    tags: tuple[int, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise InvalidInput(f"ground-set size must be a nonnegative integer, got {self.n!r}")
        rows = []
        for i, s in enumerate(self.sets, start=1):
            row = tuple(sorted(int(x) for x in s))
            for x in row:
                if not 1 <= x <= self.n:
                    raise InvalidInput(f"set {i}: element {x} outside [1, {self.n}]")
            if len(set(row)) != len(row):
                raise InvalidInput(f"set {i}: repeated element")
            rows.append(row)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sets", tuple(rows))
        if self.tags is not None:
            tags = tuple(int(t) for t in self.tags)
            if len(tags) != len(rows):
                raise InvalidInput(f"{len(tags)} tags for {len(rows)} sets")
            object.__setattr__(self, "tags", tags)

    @property
    def m(self) -> int:
        return len(self.sets)

    def incidence(self) -> np.ndarray:
        """The m x n 0/1 incidence matrix (int64)."""
        A = np.zeros((self.m, self.n), dtype=np.int64)
        for i, row in enumerate(self.sets):
            for j in row:
                A[i, j - 1] = 1
        return A

    def part(self, tag: int) -> "SetSystem":
        """Rows carrying the given tag, in order (tags kept)."""
        if self.tags is None:
            raise InvalidInput("system carries no tags")
        keep = [i for i, t in enumerate(self.tags) if t == tag]
        return SetSystem(self.n, [self.sets[i] for i in keep], [tag] * len(keep))

    def max_set_size(self) -> int:
        return max((len(s) for s in self.sets), default=0)


def check_subset(J: Iterable[int], n: int) -> tuple[int, ...]:
    J = tuple(int(x) for x in J)
    for x in J:
        if not 1 <= x <= n:
            raise InvalidInput(f"subset element {x} outside [1, {n}]")
    if any(a >= b for a, b in zip(J, J[1:])):
        raise InvalidInput("subset must be sorted and duplicate-free")
    return J


def check_coloring(chi: Sequence[int], n: int) -> tuple[int, ...]:
    chi = tuple(int(c) for c in chi)
    if len(chi) != n:
        raise InvalidInput(f"coloring has length {len(chi)}, expected {n}")
    if any(c not in (1, -1) for c in chi):
        raise InvalidInput("coloring entries must be +1 or -1")
    return chi


def restrict(F: SetSystem, J: Iterable[int]) -> SetSystem:
    """F|_J with J relabeled to 1..|J| in increasing order.

    Row count, row order and tags are preserved, so empty and duplicate
    rows survive the restriction.
    """
    J = check_subset(J, F.n)
    pos = {x: i for i, x in enumerate(J, start=1)}
    rows = [[pos[x] for x in s if x in pos] for s in F.sets]
    return SetSystem(len(J), rows, F.tags)


def union_tagged(parts: Sequence[SetSystem]) -> SetSystem:
    """Concatenate the rows of systems on a common ground set; tag l marks part l (1-based)."""
    if not parts:
        raise InvalidInput("need at least one part")
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise InvalidInput("parts live on different ground sets")
    rows, tags = [], []
    for ell, p in enumerate(parts, start=1):
        rows.extend(p.sets)
        tags.extend([ell] * p.m)
    return SetSystem(n, rows, tags)


def coloring_discrepancy(F: SetSystem, chi: Sequence[int]) -> int:
    chi = check_coloring(chi, F.n)
    return max((abs(sum(chi[j - 1] for j in s)) for s in F.sets), default=0)
