"""Vector discrepancy with dual certificates.

The primal program is

    minimize t  s.t.  a_i^T Q a_i <= t (i = 1..m),  Q_jj = 1,  Q PSD,

and its dual is

    maximize sum(z)  s.t.  sum_i w_i a_i a_i^T - diag(z) PSD,  w >= 0,  sum(w) <= 1.

A feasible dual point (w, z) certifies vecdisc(F) >= sqrt(sum(z)). Both are
solved together by a primal-dual interior-point method (HKM direction with a
Mehrotra corrector) started from the strictly feasible pair Q = I,
t = max|F_i| + 1 and w_i = 1/(2m), z_j = -1.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import InvalidInput, SetSystem, restrict
from .exactla import min_eigenvalue, psd_check

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6
DEFAULT_ITER_BUDGET = 200


@dataclass(frozen=True)
class VectorColoring:
    vectors: np.ndarray     # row j is the unit vector of element j+1
    achieved_D: float

    @property
    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T


@dataclass(frozen=True)
class DualCertificate:
    w: np.ndarray
    z: np.ndarray

    @property
    def certified_bound(self) -> float:
        return math.sqrt(max(0.0, float(np.sum(self.z))))


@dataclass(frozen=True)
class SolveReport:
    primal: VectorColoring
    dual: DualCertificate
    gap: float
    iterations: int
    status: str             # "converged" or "budget-exhausted"

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def D(self) -> float:
        return self.primal.achieved_D


def dual_matrix(F: SetSystem, w, z) -> np.ndarray:
    """M = sum_i w_i a_i a_i^T - diag(z)."""
    A = F.incidence().astype(float)
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    if w.shape != (F.m,) or z.shape != (F.n,):
        raise InvalidInput(f"certificate shapes {w.shape}, {z.shape} do not match m={F.m}, n={F.n}")
    return (A.T * w) @ A - np.diag(z)


def verify_certificate(F: SetSystem, cert: DualCertificate, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Check a dual certificate from scratch; returns (valid, certified lower bound on vecdisc)."""
    M = dual_matrix(F, cert.w, cert.z)
    w = np.asarray(cert.w, dtype=float)
    ok = bool(np.all(w >= -tol)) and float(w.sum()) <= 1 + tol and psd_check(M, tol)
    return ok, (cert.certified_bound if ok else 0.0)


def vectors_from_gram(Q: np.ndarray) -> np.ndarray:
    """Rows u_j with u_j . u_k ~ Q_jk, each renormalized to unit length."""
    lam, V = np.linalg.eigh(0.5 * (Q + Q.T))
    U = V * np.sqrt(np.clip(lam, 0.0, None))
    norms = np.linalg.norm(U, axis=1)
    bad = norms < 1e-300
    U[bad] = np.eye(len(Q))[bad]
    norms[bad] = 1.0
    return U / norms[:, None]


def set_norms(F: SetSystem, U: np.ndarray) -> np.ndarray:
    A = F.incidence().astype(float)
    return np.linalg.norm(A @ U, axis=1)


def _max_step(X: np.ndarray, dX: np.ndarray) -> float:
    L = np.linalg.cholesky(X)
    Li = np.linalg.inv(L)
    lam = np.linalg.eigvalsh(Li @ dX @ Li.T)[0]
    return math.inf if lam >= 0 else -1.0 / lam


def _max_step_lp(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    return float(np.min(-x[neg] / dx[neg])) if neg.any() else math.inf


def solve_vecdisc(F: SetSystem, tol: float = DEFAULT_TOL, budget: int = DEFAULT_ITER_BUDGET) -> SolveReport:
    """Primal vector coloring and dual certificate for vecdisc(F).

    Empty rows are dropped and repeated rows merged before solving (they
    leave the feasible region unchanged and make the Newton system
    singular); the dual weight of a merged row goes to its first copy.
    The returned primal and dual are each rounded to exact feasibility, so
    ``dual.certified_bound <= vecdisc(F) <= primal.achieved_D`` holds
    whatever the status.
    """
    if F.n < 1:
        raise InvalidInput("need n >= 1")
    if tol <= 0:
        raise InvalidInput("tol must be positive")
    first: dict[tuple[int, ...], int] = {}
    for i, row in enumerate(F.sets):
        if row:
            first.setdefault(row, i)
    keep = sorted(first.values())
    core = SetSystem(F.n, [F.sets[i] for i in keep])
    Q, w_core, z, iters = _interior_point(core, budget)
    w = np.zeros(F.m)
    w[keep] = w_core
    primal = _round_primal(F, Q)
    dual = _round_dual(F, w, z)
    gap = primal.achieved_D ** 2 - float(dual.z.sum())
    status = "converged" if gap <= tol * (1.0 + primal.achieved_D ** 2) else "budget-exhausted"
    return SolveReport(primal, dual, gap, iters, status)


def _interior_point(F: SetSystem, budget: int):
    """Raw (Q, w, z, iterations) from the path-following method on a system with distinct non-empty rows."""
    n, m = F.n, F.m
    if m == 0:
        return np.eye(n), np.zeros(0), np.zeros(n), 0

    A = F.incidence().astype(float)
    sizes = A.sum(axis=1)
    # primal: Q (n x n), LP part x = (sigma_1..sigma_m, t); dual: y = (w, z), S_Q, s
    t0 = sizes.max() + 1.0
    Q = np.eye(n)
    x = np.concatenate([t0 - sizes, [t0]])
    w = np.full(m, 1.0 / (2 * m))
    z = -np.ones(n)
    SQ = (A.T * w) @ A - np.diag(z)
    s = np.concatenate([w, [1.0 - w.sum()]])
    N = n + m + 1

    def dual_parts(dw, dz):
        """A*(dy) for y = (w, z), split in the Q block and the LP block."""
        return -(A.T * dw) @ A + np.diag(dz), np.concatenate([-dw, [dw.sum()]])

    def primal_map(GQ, gx):
        """A(X) for X = (GQ, gx): the w rows then the z rows."""
        Gs = 0.5 * (GQ + GQ.T)
        rw = -np.einsum("ij,jk,ik->i", A, Gs, A) - gx[:m] + gx[m]
        return np.concatenate([rw, np.diag(Gs)])

    b = np.concatenate([np.zeros(m), np.ones(n)])
    # iterates are judged by the gap between their rounded (exactly feasible)
    # primal and dual values; near the optimum the raw iterates can drift
    best = (math.inf, Q, w, z)
    stale = 0
    it = 0
    for it in range(1, budget + 1):
        gap = float(np.sum(Q * SQ) + x @ s)
        mu = gap / N
        true_gap = _round_primal(F, Q).achieved_D ** 2 - float(_round_dual(F, w, z).z.sum())
        log.debug("iter %d gap %.3e rounded gap %.3e", it, gap, true_gap)
        if true_gap < best[0]:
            best = (true_gap, Q, w, z)
            stale = 0
        else:
            stale += 1
        # stop well inside the tolerance: once the gap is tiny, steps along a
        # degenerate optimal face are dominated by round-off
        if best[0] <= 1e-10 * x[m] + 1e-12 or gap <= 1e-14 or stale >= 5:
            break
        try:
            Z = np.linalg.inv(SQ)
            Z = 0.5 * (Z + Z.T)
            AG, AZ = A @ Q, A @ Z
            ratio = x / s
            H = np.empty((m + n, m + n))
            H[:m, :m] = (AG @ A.T) * (AZ @ A.T) + np.diag(ratio[:m]) + ratio[m]
            H[:m, m:] = -(AG * AZ)
            H[m:, :m] = H[:m, m:].T
            H[m:, m:] = Q * Z
            # residuals of the linear constraints (near zero from the feasible start)
            rp = b - primal_map(Q, x)
            RdQ = -SQ - (-(A.T * w) @ A + np.diag(z))
            Rdx = np.concatenate([np.zeros(m), [1.0]]) - s - np.concatenate([-w, [w.sum()]])

            def direction(sigma_mu, corrQ=None, corrx=None):
                KQ = sigma_mu * Z - Q - Q @ RdQ @ Z
                kx = sigma_mu / s - x - x * Rdx / s
                if corrQ is not None:
                    KQ = KQ - corrQ @ Z
                    kx = kx - corrx / s
                rhs = rp - primal_map(KQ, kx)
                dy = np.linalg.solve(H, rhs)
                dw, dz = dy[:m], dy[m:]
                aQ, ax = dual_parts(dw, dz)
                dSQ = RdQ - aQ
                dsx = Rdx - ax
                dQ = KQ + Q @ aQ @ Z
                dQ = 0.5 * (dQ + dQ.T)
                dx = kx + x * ax / s
                return dw, dz, dQ, dx, dSQ, dsx

            def steps(dQ, dx, dSQ, dsx):
                ap = min(_max_step(Q, dQ), _max_step_lp(x, dx))
                ad = min(_max_step(SQ, dSQ), _max_step_lp(s, dsx))
                return min(1.0, 0.98 * ap), min(1.0, 0.98 * ad)

            dw, dz, dQ, dx, dSQ, dsx = direction(0.0)
            ap, ad = steps(dQ, dx, dSQ, dsx)
            mu_aff = (np.sum((Q + ap * dQ) * (SQ + ad * dSQ)) + (x + ap * dx) @ (s + ad * dsx)) / N
            sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3
            dw, dz, dQ, dx, dSQ, dsx = direction(sigma * mu, dQ @ dSQ, dx * dsx)
            ap, ad = steps(dQ, dx, dSQ, dsx)
        except np.linalg.LinAlgError:
            log.debug("numerical breakdown at iteration %d", it)
            break
        Q = Q + ap * dQ
        Q = 0.5 * (Q + Q.T)
        x = x + ap * dx
        w, z = w + ad * dw, z + ad * dz
        SQ = SQ + ad * dSQ
        SQ = 0.5 * (SQ + SQ.T)
        s = s + ad * dsx

    _, Q, w, z = best
    return Q, w, z, it


def _round_primal(F: SetSystem, Q: np.ndarray) -> VectorColoring:
    d = np.sqrt(np.clip(np.diag(Q), 1e-300, None))
    U = vectors_from_gram(Q / np.outer(d, d))
    return VectorColoring(U, float(set_norms(F, U).max(initial=0.0)))


def _round_dual(F: SetSystem, w: np.ndarray, z: np.ndarray) -> DualCertificate:
    """Project (w, z) to an exactly feasible certificate: clip and rescale w, shift z down."""
    w = np.clip(w, 0.0, None)
    if w.sum() > 1.0:
        w = w / w.sum()
    z = np.array(z, dtype=float)
    M = dual_matrix(F, w, z)
    lam = min_eigenvalue(M)
    if lam < 0:
        z = z + lam - 1e-14 * (1.0 + np.abs(M).max())
    return DualCertificate(w, z)


@dataclass(frozen=True)
class HervecResult:
    value: float            # max primal vecdisc over the visited restrictions
    lower_bound: float      # max certified dual bound over them
    subset: tuple[int, ...]
    solves: int
    certified: bool         # True only for a complete enumeration with all solves converged


def hervecdisc(F: SetSystem, mode: str = "exact", samples: int = 64, seed: int = 0,
               tol: float = DEFAULT_TOL, budget: int = 1 << 12) -> HervecResult:
    """Hereditary vector discrepancy by enumerating (or sampling) restrictions.

    Sampled mode always visits J = [n] and every singleton {j} lying in a
    non-empty set; its result is a lower bound only. ``budget`` caps the
    number of SDP solves.
    """
    n = F.n
    covered = sorted({j for s in F.sets for j in s})
    if mode == "exact":
        subsets: Sequence[tuple[int, ...]] = [J for size in range(n, 0, -1)
                                              for J in combinations(range(1, n + 1), size)]
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        subsets = [tuple(range(1, n + 1))] + [(j,) for j in covered]
        for _ in range(samples):
            J = tuple(int(j) + 1 for j in np.nonzero(rng.random(n) < 0.5)[0])
            if J:
                subsets.append(J)
    else:
        raise InvalidInput(f"unknown mode {mode!r}")
    best, best_lb, best_J = 0.0, 0.0, ()
    complete = mode == "exact"
    solves = 0
    for J in subsets:
        if solves >= budget:
            complete = False
            break
        r = solve_vecdisc(restrict(F, J), tol=tol)
        solves += 1
        complete = complete and r.converged
        if r.D > best:
            best, best_J = r.D, J
        best_lb = max(best_lb, r.dual.certified_bound)
    return HervecResult(best, best_lb, best_J, solves, complete)
