"""Exact covering decision in the plane (n = 2) and the 2x2 entry constraints."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .geometry import GeneralizedLine, Ray, TangentRay, det, plane_coverage
from .instance import QInstance, as_matrix, instance_from_matrix
from .surround import line_direction, surrounded_by_perturbation


@dataclass(frozen=True)
class SurroundVerdict:
    point: Ray
    surrounded: bool
    case_fired: Optional[str]
    witness: Optional[TangentRay] = None
    notes: tuple = ()


@dataclass(frozen=True)
class CoveringDecision:
    covered: bool
    failing_point: Optional[tuple] = None  # (index, side)
    verdicts: dict = field(default_factory=dict)
    method: str = ""


def _tangent_coord(a, v) -> int:
    """Signed coordinate of the tangent projection of v at a (n = 2)."""
    r = line_direction(a)
    return v[0] * r[0] + v[1] * r[1]


def _same_sign_nonzero(*values) -> bool:
    return all(v > 0 for v in values) or all(v < 0 for v in values)


def _interior_2d(p, u, v) -> bool:
    # p strictly inside cone(u, v): the three determinants share a sign
    return _same_sign_nonzero(det([u, v]), det([p, v]), det([u, p]))


def surround_point_2d(inst: QInstance, index: int, side: str) -> SurroundVerdict:
    """Surround verdict for one point; an inseparable pair anywhere forces False.

    In that case the local verdict is still computed and kept in the notes.
    """
    if inst.n != 2:
        raise ValueError("surround_point_2d needs n = 2")
    local = local_surround_2d(inst, index, side)
    bad = inst.inseparable_indices()
    if not bad:
        return local
    k = bad[0] + 1
    notes = (f"inseparable: s{k} = t{k}, the circle cannot be covered",)
    if local.surrounded:
        notes += (f"locally surrounded ({local.case_fired})",)
    return SurroundVerdict(local.point, False, None, local.witness, notes + local.notes)


def local_surround_2d(inst: QInstance, index: int, side: str) -> SurroundVerdict:
    k, other = index, 1 - index
    a = inst.point(k, side)
    a_opp = inst.other(k, side)
    notes = []
    s_bar = _tangent_coord(a, inst.s[other])
    t_bar = _tangent_coord(a, inst.t[other])
    degenerate = s_bar == 0 or t_bar == 0
    if s_bar * t_bar < 0:
        return SurroundVerdict(a, True, "P2-1", None, tuple(notes))
    for x_side in ("s", "t"):
        x = inst.point(other, x_side)
        if _interior_2d(a.coords, x.coords, a_opp.coords):
            return SurroundVerdict(a, True, "P2-2", None, tuple(notes))
    for x_side in ("s", "t"):
        if inst.point(other, x_side) == a:
            x_opp = inst.other(other, x_side)
            p, q = _tangent_coord(a, x_opp), _tangent_coord(a, a_opp)
            degenerate = degenerate or p == 0 or q == 0
            if p * q < 0:
                return SurroundVerdict(a, True, "P2-3", None, tuple(notes))
    ok, witness = surrounded_by_perturbation(inst, a)
    if degenerate:
        notes.append("zero tangent projection: decided by perturbation")
        if ok:
            return SurroundVerdict(a, True, "GENERAL", None, tuple(notes))
    elif ok:
        notes.append("case list missed a surrounded point")
        return SurroundVerdict(a, False, None, None, tuple(notes))
    return SurroundVerdict(a, False, None, witness, tuple(notes))


def is_covering_2d(inst: QInstance) -> CoveringDecision:
    if inst.n != 2:
        raise ValueError("is_covering_2d needs n = 2")
    verdicts = {}
    failing = None
    for i, side, _ in inst.points():
        v = surround_point_2d(inst, i, side)
        verdicts[(i, side)] = v
        if not v.surrounded and failing is None:
            failing = (i, side)
    return CoveringDecision(failing is None, failing, verdicts, "planar-surround")


def minkowski_coverage_2d(inst: QInstance):
    """Direct oracle: the union of the four planar cones, by angular sweep."""
    return plane_coverage([GeneralizedLine(inst.s[i], inst.t[i]) for i in range(2)])


# -- entry constraints --------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    ident: str
    description: str
    value: bool


@dataclass(frozen=True)
class ConstraintReport:
    points: dict  # (index, side) -> tuple[Constraint, ...]
    separable: bool = True  # False when some column of M is a negative multiple of e_k

    def holds(self, index: int, side: str) -> bool:
        return self.separable and any(c.value for c in self.points[(index, side)])


@lru_cache(maxsize=None)
def _symbolic_predicates():
    """Symbolic forms of the case predicates over the entries m1..m4.

    M = [[m1, m2], [m3, m4]], s_i = e_i, t_i = -(column i).  Column
    normalization is unnecessary: every predicate is a sign condition on
    determinants, which is invariant under positive column scaling.
    """
    import sympy

    m1, m2, m3, m4 = sympy.symbols("m1 m2 m3 m4")
    M = sympy.Matrix([[m1, m2], [m3, m4]])
    pts = {
        (0, "s"): sympy.Matrix([1, 0]),
        (1, "s"): sympy.Matrix([0, 1]),
        (0, "t"): -M[:, 0],
        (1, "t"): -M[:, 1],
    }

    def d(u, v):
        return sympy.expand(sympy.Matrix.hstack(u, v).det())

    out = {}
    for k in (0, 1):
        o = 1 - k
        for side in ("s", "t"):
            a = pts[(k, side)]
            a_opp = pts[(k, "t" if side == "s" else "s")]
            rows = []
            rows.append(
                ("1", f"({d(a, pts[(o, 's')])})*({d(a, pts[(o, 't')])}) < 0")
            )
            for xs in ("s", "t"):
                x = pts[(o, xs)]
                rows.append(
                    (
                        f"2{xs}",
                        f"{d(x, a_opp)}, {d(a, a_opp)}, {d(x, a)} nonzero with one common sign",
                    )
                )
            for xs in ("s", "t"):
                x = pts[(o, xs)]
                x_opp = pts[(o, "t" if xs == "s" else "s")]
                rows.append(
                    (
                        f"3{xs}",
                        f"{d(x, a)} = 0 and ({sympy.expand(x.dot(a))}) > 0 and "
                        f"({d(a, x_opp)})*({d(a, a_opp)}) < 0",
                    )
                )
            out[(k, side)] = tuple(rows)
    return out


def constraints_2x2(M) -> ConstraintReport:
    """Evaluate the per-point case constraints on a concrete 2x2 matrix.

    Constraint ``1``: the two points of the other pair project to opposite
    sides of the tangent line.  ``2s``/``2t``: the point is strictly inside
    the cone spanned by that point of the other pair and its own partner.
    ``3s``/``3t``: the point coincides with that point of the other pair and
    the two partners project to opposite sides.
    """
    M = as_matrix(M)
    if M.n != 2:
        raise ValueError("constraints_2x2 needs a 2x2 matrix")
    inst = instance_from_matrix(M)
    text = _symbolic_predicates()
    points = {}
    for k in (0, 1):
        o = 1 - k
        for side in ("s", "t"):
            a = inst.point(k, side)
            a_opp = inst.other(k, side)
            desc = dict(text[(k, side)])
            vals = []
            vals.append(("1", _tangent_coord(a, inst.s[o]) * _tangent_coord(a, inst.t[o]) < 0))
            for xs in ("s", "t"):
                x = inst.point(o, xs)
                vals.append((f"2{xs}", _interior_2d(a.coords, x.coords, a_opp.coords)))
            for xs in ("s", "t"):
                x = inst.point(o, xs)
                x_opp = inst.other(o, xs)
                vals.append(
                    (
                        f"3{xs}",
                        x == a and _tangent_coord(a, x_opp) * _tangent_coord(a, a_opp) < 0,
                    )
                )
            points[(k, side)] = tuple(Constraint(i, desc[i], v) for i, v in vals)
    return ConstraintReport(points, not inst.inseparable_indices())
