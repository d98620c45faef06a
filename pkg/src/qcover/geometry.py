"""Exact ray, cone and sector predicates.

Every direction is a :class:`Ray`, stored as a primitive integer vector, so
two rays are equal exactly when their coordinate tuples are equal.  Nothing
here normalizes to unit length or touches floating point.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, reduce
from math import gcd, lcm
from typing import Iterable, Optional, Sequence, Union

Number = Union[int, Fraction]
Vec = tuple  # tuple of int or Fraction


def primitive(values: Iterable) -> tuple[int, ...]:
    """Scale a nonzero rational vector to its primitive integer representative."""
    fr = [Fraction(v) for v in values]
    den = reduce(lcm, (f.denominator for f in fr), 1)
    ints = [int(f * den) for f in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("the zero vector does not define a ray")
    return tuple(x // g for x in ints)


def _primitive_or_zero(values: Iterable) -> tuple[int, ...]:
    vals = tuple(values)
    if not any(vals):
        return tuple(0 for _ in vals)
    return primitive(vals)


@dataclass(frozen=True)
class Ray:
    """A nonzero direction, identified up to positive scaling."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", primitive(self.coords))

    @classmethod
    def of(cls, *values) -> "Ray":
        return cls(tuple(values))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __neg__(self) -> "Ray":
        return Ray(tuple(-x for x in self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return f"Ray{self.coords}"


class TangentFlag(enum.Enum):
    PROPER = "proper"
    ZERO_PARALLEL = "zero-parallel"
    ZERO_ANTIPODAL = "zero-antipodal"


@dataclass(frozen=True)
class TangentRay:
    """A direction in the hyperplane orthogonal to ``base``.

    ``coords`` is primitive when the flag is PROPER and all zeros otherwise.
    """

    base: Ray
    coords: tuple[int, ...]
    flag: TangentFlag = TangentFlag.PROPER

    @property
    def is_zero(self) -> bool:
        return self.flag is not TangentFlag.PROPER

    def __neg__(self) -> "TangentRay":
        return TangentRay(self.base, tuple(-x for x in self.coords), self.flag)


@dataclass(frozen=True)
class GeneralizedLine:
    """The pair of rays ``[u, v]``: the union of the two rays through u and v."""

    u: object
    v: object


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class MembershipVerdict:
    status: Membership
    certificate: Optional[tuple[Fraction, ...]] = None

    @property
    def inside(self) -> bool:
        return self.status is not Membership.OUTSIDE


@dataclass(frozen=True)
class CoverageVerdict:
    covered: bool
    gap_witness: Optional[Ray] = None


# -- small exact linear algebra ---------------------------------------------


def _coords(v) -> tuple:
    if isinstance(v, (Ray, TangentRay)):
        return v.coords
    return tuple(v)


def dot(u, v) -> Number:
    return sum(a * b for a, b in zip(_coords(u), _coords(v)))


def cross(u, v) -> tuple:
    u, v = _coords(u), _coords(v)
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def cross2(u, v) -> Number:
    u, v = _coords(u), _coords(v)
    return u[0] * v[1] - u[1] * v[0]


def det(columns: Sequence) -> Number:
    """Exact determinant of the square matrix whose columns are given."""
    cols = [_coords(c) for c in columns]
    n = len(cols)
    if any(len(c) != n for c in cols):
        raise ValueError("determinant needs n vectors of dimension n")
    if n == 1:
        return cols[0][0]
    if n == 2:
        return cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]
    if n == 3:
        return dot(cols[0], cross(cols[1], cols[2]))
    a = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    sign = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            if f:
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
    result = Fraction(sign)
    for k in range(n):
        result *= a[k][k]
    return result


def rank(vectors: Sequence) -> int:
    rows = [[Fraction(x) for x in _coords(v)] for v in vectors]
    if not rows:
        return 0
    m = len(rows[0])
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def _solve_columns(cols: Sequence[tuple], rhs: Sequence[tuple]):
    """Solve ``B x = b`` for each right-hand side b, B having independent columns.

    Returns one solution tuple per right-hand side, or None when the columns
    are dependent or some system is inconsistent.
    """
    n = len(cols[0])
    k = len(cols)
    nr = len(rhs)
    a = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(b[i]) for b in rhs] for i in range(n)]
    width = k + nr
    row = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(row, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[row], a[piv] = a[piv], a[row]
        p = a[row][c]
        if p != 1:
            a[row] = [x / p for x in a[row]]
        for i in range(n):
            if i != row and a[i][c] != 0:
                f = a[i][c]
                ai, ar = a[i], a[row]
                a[i] = [ai[t] - f * ar[t] for t in range(width)]
        pivots.append(row)
        row += 1
    for i in range(row, n):
        if any(a[i][k + t] != 0 for t in range(nr)):
            return None
    return [tuple(a[pivots[c]][k + t] for c in range(k)) for t in range(nr)]


def _independent_subsets(k: int, n: int):
    for size in range(min(k, n), 0, -1):
        yield from itertools.combinations(range(k), size)


def nonneg_combination(gens: Sequence, target) -> Optional[tuple[Fraction, ...]]:
    """Exact nonnegative coefficients with ``sum(l_i g_i) == target``, or None.

    Carathéodory: a feasible target is a nonnegative combination of a
    linearly independent subset, so enumerating independent subsets is a
    complete exact feasibility test for the small sizes used here.
    """
    gens = [_coords(g) for g in gens]
    target = _coords(target)
    k = len(gens)
    if not any(target):
        return tuple(Fraction(0) for _ in range(k))
    for subset in _independent_subsets(k, len(target)):
        sol = _solve_columns([gens[i] for i in subset], [target])
        if sol is None:
            continue
        lam = sol[0]
        if all(x >= 0 for x in lam):
            full = [Fraction(0)] * k
            for i, x in zip(subset, lam):
                full[i] = x
            return tuple(full)
    return None


def _check_dims(*vectors):
    dims = {len(_coords(v)) for v in vectors}
    if len(dims) > 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")


# -- operations ---------------------------------------------------------------


def ray_equal(u: Ray, v: Ray) -> bool:
    _check_dims(u, v)
    uc, vc = _coords(u), _coords(v)
    n = len(uc)
    for i in range(n):
        for j in range(i + 1, n):
            if uc[i] * vc[j] != uc[j] * vc[i]:
                return False
    return dot(uc, vc) > 0


def tangent_project(a: Ray, v) -> TangentRay:
    """Orthogonal projection of ``v`` onto the hyperplane orthogonal to ``a``."""
    _check_dims(a, v)
    ac, vc = _coords(a), _coords(v)
    aa = dot(ac, ac)
    va = dot(vc, ac)
    w = tuple(aa * x - va * y for x, y in zip(vc, ac))
    if any(w):
        return TangentRay(a, primitive(w), TangentFlag.PROPER)
    flag = TangentFlag.ZERO_PARALLEL if va > 0 else TangentFlag.ZERO_ANTIPODAL
    return TangentRay(a, tuple(0 for _ in w), flag)


def orientation(vectors: Sequence) -> int:
    d = det(vectors)
    return (d > 0) - (d < 0)


def cone_member(q, gens: Sequence) -> MembershipVerdict:
    """Decide whether q lies in the closed cone spanned by ``gens``.

    INTERIOR requires the generators to span the whole space and q to have a
    strictly positive certificate; rank-deficient cones are never INTERIOR.
    """
    if not gens:
        raise ValueError("empty generator list")
    _check_dims(q, *gens)
    gc = [_coords(g) for g in gens]
    qc = _coords(q)
    n = len(qc)
    if len(gc) == n:
        sol = _solve_columns(gc, [qc])
        if sol is not None:
            lam = sol[0]
            if all(x > 0 for x in lam):
                return MembershipVerdict(Membership.INTERIOR, lam)
            if all(x >= 0 for x in lam):
                return MembershipVerdict(Membership.BOUNDARY, lam)
            return MembershipVerdict(Membership.OUTSIDE)
    cert = nonneg_combination(gc, qc)
    if cert is None:
        return MembershipVerdict(Membership.OUTSIDE)
    if len(gc) > n and rank(gc) == n:
        # strictly positive certificate exists iff q - t*sum(g) stays inside for small t
        total = tuple(-sum(col) for col in zip(*gc))
        if any(total) and perturbed_member(qc, total, gc):
            return MembershipVerdict(Membership.INTERIOR, cert)
        if not any(total):
            return MembershipVerdict(Membership.INTERIOR, cert)
    return MembershipVerdict(Membership.BOUNDARY, cert)


def perturbed_member(a, d, gens: Sequence) -> bool:
    """True iff ``a + eps*d`` lies in cone(gens) for all small rational eps > 0.

    Each independent subset B gives coefficients ``l0 + eps*l1`` with
    ``B l0 = a`` and ``B l1 = d``; the subset certifies membership exactly when
    every coefficient is lexicographically nonnegative as eps -> 0+.
    """
    if isinstance(d, TangentRay) and d.is_zero:
        raise ValueError("perturbation direction is degenerate")
    ac, dc = _coords(a), _coords(d)
    if not any(dc):
        raise ValueError("perturbation direction is degenerate")
    gc = [_coords(g) for g in gens]
    _check_dims(ac, dc, *gc)
    for subset in _independent_subsets(len(gc), len(ac)):
        sol = _solve_columns([gc[i] for i in subset], [ac, dc])
        if sol is None:
            continue
        l0, l1 = sol
        if all(x > 0 or (x == 0 and y >= 0) for x, y in zip(l0, l1)):
            return True
    return False


# -- planar sectors -------------------------------------------------------------


def _half(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = cross2(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_angular(vectors: Iterable) -> list[tuple[int, ...]]:
    """Distinct primitive 2-D directions in counterclockwise order from +x."""
    uniq = {primitive(v) for v in vectors if any(v)}
    return sorted(uniq, key=cmp_to_key(_angle_cmp))


def gap_probe(u, v) -> tuple[int, ...]:
    """A direction strictly inside the open counterclockwise arc from u to v."""
    c = cross2(u, v)
    if c > 0:
        return primitive((u[0] + v[0], u[1] + v[1]))
    if c < 0:
        return primitive((-u[0] - v[0], -u[1] - v[1]))
    if dot(u, v) < 0:
        return primitive((-u[1], u[0]))
    return primitive((-u[0], -u[1]))


def member2(q, gens: Sequence) -> bool:
    """Closed planar cone membership using integer sign predicates only."""
    gens = [g for g in gens if g[0] or g[1]]
    for g in gens:
        if cross2(g, q) == 0 and dot(g, q) > 0:
            return True
    for g, h in itertools.combinations(gens, 2):
        c = cross2(g, h)
        if c == 0:
            continue
        lam = cross2(q, h) * c
        mu = cross2(g, q) * c
        if lam >= 0 and mu >= 0:
            return True
    return False


def cones_cover_plane(cones: Sequence[Sequence]) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Whether a union of closed planar cones is the whole plane.

    Sector boundaries are generator directions, so checking every critical
    direction and one probe inside every gap between consecutive criticals
    is exhaustive.
    """
    gens = [tuple(g) for cone in cones for g in cone if any(g)]
    crit = sort_angular(gens)
    if not crit:
        return False, (1, 0)
    probes = []
    for idx, c in enumerate(crit):
        nxt = crit[(idx + 1) % len(crit)]
        probes.append(c)
        probes.append(gap_probe(c, nxt) if len(crit) > 1 else primitive((-c[0], -c[1])))
    for p in probes:
        if not any(member2(p, cone) for cone in cones):
            return False, p
    return True, None


def expand_lines(lines: Sequence[GeneralizedLine]) -> list[list[tuple]]:
    """The cones of the Minkowski sum of generalized lines, one per selector."""
    pairs = [(_coords(l.u), _coords(l.v)) for l in lines]
    return [list(choice) for choice in itertools.product(*pairs)]


def plane_coverage(lines: Sequence[GeneralizedLine]) -> CoverageVerdict:
    if not lines:
        raise ValueError("empty input")
    for l in lines:
        for r in (l.u, l.v):
            c = _coords(r)
            if len(c) != 2:
                raise ValueError("plane_coverage needs 2-D rays")
            if not any(c):
                raise ValueError("zero ray in generalized line")
    covered, witness = cones_cover_plane(expand_lines(lines))
    return CoverageVerdict(covered, None if covered else Ray(witness))
