"""LCP enumeration, the matrix classifiers, and sampled coverage."""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

import numpy as np

from .geometry import Ray, _coords, det, nonneg_combination, primitive, rank
from .instance import (
    ComplementaryCone,
    DegenerateInstanceError,
    QInstance,
    RationalMatrix,
    as_matrix,
    enumerate_cones,
    instance_from_matrix,
)


@dataclass(frozen=True)
class LcpSolution:
    w: tuple
    z: tuple
    selector: int  # bit i set: z_i is the basic variable


def complementary_columns(M: RationalMatrix, selector: int) -> list[tuple]:
    n = M.n
    cols = []
    for i in range(n):
        if selector >> i & 1:
            cols.append(tuple(-x for x in M.column(i)))
        else:
            cols.append(tuple(Fraction(int(j == i)) for j in range(n)))
    return cols


def lcp_solve_all(q, M) -> list[LcpSolution]:
    """One certificate per selector whose complementary cone contains q."""
    M = as_matrix(M)
    q = tuple(Fraction(x) for x in _coords(q))
    if len(q) != M.n:
        raise ValueError("dimension mismatch between q and M")
    out = []
    for sel in range(1 << M.n):
        x = nonneg_combination(complementary_columns(M, sel), q)
        if x is None:
            continue
        w = tuple(Fraction(0) if sel >> i & 1 else x[i] for i in range(M.n))
        z = tuple(x[i] if sel >> i & 1 else Fraction(0) for i in range(M.n))
        out.append(LcpSolution(w, z, sel))
    return out


def check_solution(sol: LcpSolution, q, M) -> bool:
    M = as_matrix(M)
    q = tuple(Fraction(x) for x in _coords(q))
    n = M.n
    mz = [sum(M[i, j] * sol.z[j] for j in range(n)) for i in range(n)]
    return (
        all(sol.w[i] - mz[i] == q[i] for i in range(n))
        and sum(a * b for a, b in zip(sol.w, sol.z)) == 0
        and all(x >= 0 for x in sol.w + sol.z)
    )


def is_R0(M) -> bool:
    """No selector admits a nonzero x >= 0 with M_J x = 0."""
    M = as_matrix(M)
    n = M.n
    target = tuple([0] * n + [1])
    for sel in range(1 << n):
        lifted = [col + (1,) for col in complementary_columns(M, sel)]
        if nonneg_combination(lifted, target) is not None:
            return False
    return True


def principal_minors(M):
    M = as_matrix(M)
    n = M.n
    for size in range(1, n + 1):
        for idx in itertools.combinations(range(n), size):
            cols = [tuple(M[i, j] for i in idx) for j in idx]
            yield idx, det(cols)


def is_P(M) -> bool:
    return all(m > 0 for _, m in principal_minors(M))


def murty_nonneg_q(M) -> Optional[bool]:
    """For entrywise nonnegative M: Q-matrix iff every diagonal entry is positive."""
    M = as_matrix(M)
    if any(x < 0 for row in M.entries for x in row):
        return None
    return all(M[i, i] > 0 for i in range(M.n))


# -- sampled coverage -----------------------------------------------------------------


def _adjugate(cols: list[tuple]) -> list[list[int]]:
    """Integer adjugate A of the column matrix G, so that A @ G = det(G) * I."""
    n = len(cols)
    if n == 1:
        return [[1]]
    G = [[cols[j][i] for j in range(n)] for i in range(n)]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[G[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            mcols = [tuple(minor[r][c] for r in range(n - 1)) for c in range(n - 1)]
            adj[i][j] = int((-1) ** (i + j) * det(mcols))
    return adj


def _orthogonal_complement(vectors: list[tuple], n: int) -> list[tuple]:
    """Integer basis of the vectors orthogonal to all of ``vectors``."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = -rows[k][f]
        basis.append(primitive(v))
    return basis


class ConeTable:
    """Exact membership of many integer probes in all complementary cones.

    Full-rank cones use the integer adjugate (signs of A q); rank-deficient
    cones prefilter by the orthogonal complement and confirm survivors with
    the exact Carathéodory test.
    """

    def __init__(self, cones: list[ComplementaryCone]):
        self.cones = cones
        self.full = []
        self.flat = []
        for c in cones:
            cols = [g.coords for g in c.generators]
            if not c.degenerate:
                d = det(cols)
                sgn = 1 if d > 0 else -1
                self.full.append(np.array(_adjugate(cols), dtype=object) * sgn)
            else:
                n = len(cols)
                self.flat.append((cols, _orthogonal_complement(cols, n)))

    def covered(self, probes: np.ndarray) -> np.ndarray:
        """Boolean mask over probe rows (integer array, shape (m, n))."""
        m = probes.shape[0]
        hit = np.zeros(m, dtype=bool)
        big = int(np.abs(probes).max()) if m else 0
        for adj in self.full:
            bound = int(np.abs(adj.astype(object)).max()) * big * adj.shape[0]
            if bound < 2**62:
                lam = probes.astype(np.int64) @ adj.astype(np.int64).T
            else:
                lam = probes.astype(object) @ adj.T
            hit |= np.all(lam >= 0, axis=1)
        for cols, comp in self.flat:
            if comp:
                C = np.array(comp, dtype=object)
                in_span = np.all((probes.astype(object) @ C.T) == 0, axis=1)
            else:
                in_span = np.ones(m, dtype=bool)
            for r in np.nonzero(in_span & ~hit)[0]:
                if nonneg_combination(cols, tuple(int(x) for x in probes[r])) is not None:
                    hit[r] = True
        return hit


@lru_cache(maxsize=32)
def probe_directions(n: int, count: int, seed: int) -> np.ndarray:
    """Deterministic rational probe rays: an integer grid then a seeded stream.

    The grid is every primitive vector with coordinates in [-k, k], with k
    the largest value whose grid fits in half of ``count``.
    """
    budget = count // 2
    grid: list = []
    k = 1
    while True:
        cand = [
            v
            for v in itertools.product(range(-k, k + 1), repeat=n)
            if any(v) and _gcd_all(v) == 1
        ]
        if len(cand) > budget and grid:
            break
        grid = cand
        if len(cand) > budget:
            grid = cand[:budget]
            break
        k += 1
    rng = random.Random(seed)
    rest = []
    lim = 1 << 20
    while len(grid) + len(rest) < count:
        v = tuple(rng.randint(-lim, lim) for _ in range(n))
        if any(v):
            rest.append(primitive(v))
    return np.array(grid[:count] + rest, dtype=np.int64).reshape(-1, n)


def _gcd_all(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


@dataclass(frozen=True)
class SampleReport:
    probes: int
    covered: int
    witnesses: tuple  # up to 100 uncovered Rays

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.covered, self.probes)


def sample_coverage(inst: QInstance, probe_count: int = 10_000, seed: int = 0) -> SampleReport:
    if probe_count <= 0:
        raise ValueError("probe_count must be positive")
    probes = probe_directions(inst.n, probe_count, seed)
    hit = ConeTable(enumerate_cones(inst)).covered(probes)
    miss = np.nonzero(~hit)[0][:100]
    return SampleReport(
        int(probes.shape[0]),
        int(hit.sum()),
        tuple(Ray(tuple(int(x) for x in probes[r])) for r in miss),
    )


# -- classification ---------------------------------------------------------------------


class QStatus(enum.Enum):
    YES = "yes"
    NO = "no"
    SAMPLED_ONLY = "sampled-only"


@dataclass(frozen=True)
class Classification:
    is_Q: QStatus
    is_P: bool
    is_R0: bool
    murty_applicable: bool
    murty_Q: Optional[bool]
    method: str
    sample: Optional[SampleReport] = None
    failing_point: Optional[tuple] = None


def decide_q(inst: QInstance):
    """(covered, method, failing point) for n <= 3."""
    n = inst.n
    if n == 1:
        return inst.s[0] == -inst.t[0], "n1-antipodal", None
    if n == 2:
        from .planar import is_covering_2d

        d = is_covering_2d(inst)
        return d.covered, d.method, d.failing_point
    if n == 3:
        from .spatial import is_covering_3d

        d = is_covering_3d(inst)
        return d.covered, d.method, d.failing_point
    raise ValueError("exact decisions are available for n <= 3 only")


def classify(M, probe_count: int = 10_000, seed: int = 0) -> Classification:
    M = as_matrix(M)
    p, r0, murty = is_P(M), is_R0(M), murty_nonneg_q(M)
    try:
        inst = instance_from_matrix(M)
    except DegenerateInstanceError:
        return Classification(QStatus.NO, p, r0, murty is not None, murty, "zero-column")
    if M.n <= 3:
        covered, method, failing = decide_q(inst)
        status = QStatus.YES if covered else QStatus.NO
        return Classification(status, p, r0, murty is not None, murty, method, None, failing)
    report = sample_coverage(inst, probe_count, seed)
    return Classification(
        QStatus.SAMPLED_ONLY, p, r0, murty is not None, murty, "sampled", report
    )
