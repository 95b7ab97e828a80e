"""From a vector-discrepancy certificate to an explicit determinant witness.

Given a dual certificate (w, z) with sum(z) = D^2, the columns where z is
large and nearly constant carry a weighted incidence submatrix whose Gram
matrix has a large smallest eigenvalue; a maximal minor of that column block
is then a determinant witness of size comparable to D / sqrt(log n). Every
constant is explicit here:

* the bucket keeps at least ||y||^2 / (2L) of the squared mass, with
  L = ceil(2 log2 n) + 1 dyadic levels;
* lambda_min(C_w^T C_w) >= Dt^2 / k, where Dt = ||gamma[K]|| / 2;
* max_I det(C[I,*])^2 >= k! det(C_w^T C_w) >= k! (Dt^2/k)^k, so
  |det B|^(1/k) >= Dt / sqrt(e).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import InvalidInput, SetSystem
from .detlb import DetlbWitness, NoWitness, detlb_exact, detlb_greedy
from .disc import herdisc_exact
from .exactla import DEFAULT_MINOR_BUDGET, int_det, min_eigenvalue
from .vecdisc import DEFAULT_TOL, DualCertificate, solve_vecdisc, verify_certificate


@dataclass(frozen=True)
class BucketResult:
    K: tuple[int, ...]      # 0-based positions in y
    level: int
    t_level: float
    norm_K: float
    levels: int             # L

    def check(self, y) -> bool:
        y = np.abs(np.asarray(y, dtype=float))
        if not self.K:
            return False
        yk = y[list(self.K)]
        inside = bool(np.all(yk > self.t_level) and np.all(yk <= 2 * self.t_level))
        mass = float(np.sum(yk ** 2))
        total = float(np.sum(y ** 2))
        return inside and mass >= total / (2 * self.levels) * (1 - 1e-12)


def num_levels(n: int) -> int:
    return math.ceil(2 * math.log2(n)) + 1 if n >= 1 else 1


def almost_constant_subset(y) -> BucketResult:
    """Dyadic level of |y| carrying the most squared mass.

    Level i holds the indices with |y_j| in (2^-(i+1) y_max, 2^-i y_max];
    only the top L = ceil(2 log2 n) + 1 levels are considered. Ties go to the
    shallower level.
    """
    y = np.abs(np.asarray(y, dtype=float))
    if y.ndim != 1 or y.size == 0 or not np.any(y > 0):
        raise InvalidInput("almost_constant_subset needs a nonzero vector")
    L = num_levels(y.size)
    ymax = float(y.max())
    best = None
    for i in range(L):
        hi = ymax * 2.0 ** -i
        lo = hi / 2
        idx = np.nonzero((y > lo) & (y <= hi))[0]
        mass = float(np.sum(y[idx] ** 2))
        if idx.size and (best is None or mass > best[0]):
            best = (mass, i, lo, idx)
    mass, i, lo, idx = best
    return BucketResult(tuple(int(j) for j in idx), i, lo, math.sqrt(mass), L)


@dataclass
class ChainReport:
    D: float                        # certified lower bound sqrt(sum z)
    certificate: DualCertificate
    J: tuple[int, ...]              # ground elements (1-based) with z_j > tol
    K: tuple[int, ...]              # ground elements (1-based) of the bucket
    t_level: float
    levels: int
    D_tilde: float
    lambda_min: float
    gram_det: float
    witness: DetlbWitness | None    # rows index sets, cols index ground elements (both 0-based)
    mode: str                       # "exact", "greedy" or "degenerate"
    tol: float
    slacks: dict[str, float] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.K)


def _weighted_block(F: SetSystem, w, K):
    C = F.incidence()[:, [j - 1 for j in K]]
    Cw = np.sqrt(np.clip(np.asarray(w, dtype=float), 0, None))[:, None] * C
    G = Cw.T @ Cw
    return C, G


def _best_rows(C: np.ndarray, budget: int):
    """Lexicographically first row set I maximizing |det C[I,*]| (C is m x k), or None if over budget."""
    m, k = C.shape
    if math.comb(m, k) > budget:
        return None
    rows = C.tolist()
    best = None
    for I in combinations(range(m), k):
        d = int_det([rows[i] for i in I])
        if d and (best is None or abs(d) > abs(best[1])):
            best = (I, d)
    return best


def extract_witness(F: SetSystem, tol: float = DEFAULT_TOL,
                    budget: int = DEFAULT_MINOR_BUDGET, solve=None) -> ChainReport:
    """Run the certificate-to-witness chain on F and record every intermediate quantity."""
    sol = solve if solve is not None else solve_vecdisc(F, tol=tol)
    cert = sol.dual
    z = np.asarray(cert.z, dtype=float)
    D = cert.certified_bound
    J = tuple(int(j) + 1 for j in np.nonzero(z > tol)[0])
    if not J:
        return ChainReport(D, cert, (), (), 0.0, 0, 0.0, 0.0, 0.0, None, "degenerate", tol)
    gamma = np.sqrt(z[[j - 1 for j in J]])
    bucket = almost_constant_subset(gamma)
    K = tuple(J[i] for i in bucket.K)
    k = len(K)
    D_tilde = 0.5 * bucket.norm_K
    C, G = _weighted_block(F, cert.w, K)
    lam = min_eigenvalue(G)
    gdet = float(np.linalg.det(G))

    found = _best_rows(C, budget)
    cols = tuple(j - 1 for j in K)
    if found is not None:
        I, d = found
        witness = DetlbWitness(I, cols, d)
        mode = "exact"
    else:
        g = detlb_greedy(C, k)
        witness = DetlbWitness(g.rows, tuple(cols[c] for c in g.cols), g.det, certified=False)
        mode = "greedy"
    report = ChainReport(D, cert, J, K, bucket.t_level, bucket.levels, D_tilde, lam, gdet,
                         witness, mode, tol)
    report.slacks = chain_slacks(report)
    return report


def chain_slacks(r: ChainReport) -> dict[str, float]:
    k = r.k
    if r.witness is None or k == 0:
        return {}
    bound = (r.D_tilde ** 2 / k)
    out = {
        "lambda_min": r.lambda_min - bound,
        "det_vs_lambda": r.gram_det - r.lambda_min ** k,
        "det_vs_bound": r.gram_det - bound ** k,
        "final": r.witness.value - r.D_tilde / math.sqrt(math.e),
    }
    if r.mode == "exact":
        out["minor_vs_gram"] = r.witness.det ** 2 - math.factorial(k) * r.gram_det
    return out


@dataclass
class ChainCheck:
    ok: bool
    failed: str | None
    links: dict[str, bool]


def verify_chain(F: SetSystem, r: ChainReport, tol: float | None = None) -> ChainCheck:
    """Re-check every link of a ChainReport with fresh computations.

    Links: (a) certificate, (b) bucket, (c) smallest eigenvalue, (d) Gram
    determinant, (e) maximal minor vs Gram determinant (exact mode only),
    (f) final witness bound. The first failing link is named.
    """
    tol = r.tol if tol is None else tol
    links: dict[str, bool] = {}

    def done(name=None):
        return ChainCheck(name is None, name, links)

    links["a_certificate"] = verify_certificate(F, r.certificate, tol)[0] and \
        abs(r.certificate.certified_bound - r.D) <= tol
    if not links["a_certificate"]:
        return done("a_certificate")
    z = np.asarray(r.certificate.z, dtype=float)
    J = tuple(int(j) + 1 for j in np.nonzero(z > tol)[0])
    if r.mode == "degenerate":
        links["degenerate"] = not J and r.witness is None
        return done(None if links["degenerate"] else "degenerate")
    if r.witness is None or not r.K:
        links["witness_present"] = False
        return done("witness_present")

    gamma_J = np.sqrt(z[[j - 1 for j in J]])
    pos = {j: i for i, j in enumerate(J)}
    k = len(r.K)
    b_ok = J == tuple(r.J) and all(j in pos for j in r.K)
    if b_ok:
        gK = np.sqrt(z[[j - 1 for j in r.K]])
        bucket = BucketResult(tuple(pos[j] for j in r.K), 0, r.t_level, float(np.linalg.norm(gK)),
                              num_levels(len(J)))
        b_ok = (bucket.check(gamma_J) and r.levels == bucket.levels
                and abs(r.D_tilde - 0.5 * bucket.norm_K) <= tol * (1 + r.D_tilde))
    links["b_bucket"] = b_ok
    if not b_ok:
        return done("b_bucket")

    _, G = _weighted_block(F, r.certificate.w, r.K)
    lam = min_eigenvalue(G)
    bound = r.D_tilde ** 2 / k
    links["c_lambda_min"] = (abs(lam - r.lambda_min) <= tol * (1 + abs(lam))
                             and r.lambda_min >= bound - tol)
    if not links["c_lambda_min"]:
        return done("c_lambda_min")

    gdet = float(np.linalg.det(G))
    links["d_gram_det"] = (abs(gdet - r.gram_det) <= tol * (1 + abs(gdet))
                           and gdet >= max(lam, 0.0) ** k * (1 - tol)
                           and gdet >= bound ** k * (1 - tol))
    if not links["d_gram_det"]:
        return done("d_gram_det")

    wit = r.witness
    cols = tuple(j - 1 for j in r.K)
    A = F.incidence()
    w_ok = (wit.k > 0 and wit.verify(A) and
            (r.mode != "exact" or (tuple(wit.cols) == cols and wit.k == k)))
    links["witness_exact"] = w_ok
    if not w_ok:
        return done("witness_exact")

    if r.mode == "exact":
        C = A[:, list(cols)].tolist()
        top = max(abs(int_det([C[i] for i in I])) for I in combinations(range(len(C)), k))
        links["e_minor_vs_gram"] = (abs(wit.det) == top
                                    and top ** 2 >= math.factorial(k) * gdet * (1 - tol))
        if not links["e_minor_vs_gram"]:
            return done("e_minor_vs_gram")

    links["f_final"] = wit.value >= r.D_tilde / math.sqrt(math.e) - tol
    if not links["f_final"]:
        return done("f_final")
    return done()


@dataclass(frozen=True)
class GapRecord:
    herdisc: int
    herdisc_subset: tuple[int, ...]
    detlb: DetlbWitness
    ratio: float
    reference_scale: float
    certified: bool


def gap_report(F: SetSystem, node_budget: int = 50_000_000,
               minor_budget: int = DEFAULT_MINOR_BUDGET) -> GapRecord:
    """herdisc / detlb next to the log(mn) sqrt(log n) scale, for empirical tables."""
    h = herdisc_exact(F, node_budget)
    try:
        w = detlb_exact(F.incidence(), minor_budget)
    except NoWitness:
        raise InvalidInput("detlb undefined: incidence matrix is zero")
    ratio = h.value / w.value
    scale = math.log(F.m * F.n) * math.sqrt(math.log(F.n)) if F.m * F.n > 1 else 0.0
    return GapRecord(h.value, h.subset, w, ratio, scale, h.certified and w.certified)
