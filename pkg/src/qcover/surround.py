"""Local structure of the covering around a single ray.

Near a point a of a polyhedral cone C, C coincides with a + T where
T = cone(gens(C) + [-a]) is the cone of feasible directions.  Every such T
contains the line through a, so a ray a is surrounded exactly when the
tangent projections cone(P_a gens(C)), over the cones C containing a,
cover the whole hyperplane orthogonal to a.  Both routes below decide this
exactly; they share the critical directions but not the membership test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .geometry import (
    Ray,
    TangentFlag,
    TangentRay,
    _coords,
    cone_member,
    cones_cover_plane,
    dot,
    gap_probe,
    perturbed_member,
    primitive,
    sort_angular,
    tangent_project,
)
from .instance import ComplementaryCone, QInstance, enumerate_cones


@dataclass(frozen=True)
class TangentChart:
    """Linear isomorphism between a^perp (n = 3) and the plane.

    Dropping a coordinate where a is nonzero is injective on a^perp, so cone
    coverage questions transfer unchanged.
    """

    base: Ray
    drop: int

    @classmethod
    def at(cls, a: Ray) -> "TangentChart":
        k = max(range(a.dim), key=lambda i: abs(a[i]))
        return cls(a, k)

    def to_plane(self, v) -> tuple:
        """Chart coordinates of the tangent projection of an ambient vector."""
        tr = v if isinstance(v, TangentRay) else tangent_project(self.base, v)
        return tuple(x for i, x in enumerate(tr.coords) if i != self.drop)

    def lift(self, w) -> TangentRay:
        a, k = self.base.coords, self.drop
        others = [i for i in range(3) if i != k]
        sgn = 1 if a[k] > 0 else -1
        x = [0, 0, 0]
        for i, wi in zip(others, w):
            x[i] = sgn * a[k] * wi
        x[k] = -sgn * sum(a[i] * wi for i, wi in zip(others, w))
        return TangentRay(self.base, primitive(x), TangentFlag.PROPER)


def line_direction(a: Ray) -> tuple:
    """Positive orientation of the tangent line at a 2-D ray."""
    return (-a[1], a[0])


def cones_containing(inst: QInstance, a: Ray, cones=None) -> list[ComplementaryCone]:
    cones = enumerate_cones(inst) if cones is None else cones
    return [c for c in cones if cone_member(a, c.generators).inside]


def tangent_sides_1d(a: Ray, vectors) -> set:
    r = line_direction(a)
    sides = set()
    for v in vectors:
        x = dot(_coords(v), r)
        if x:
            sides.add(1 if x > 0 else -1)
    return sides


def surrounded_by_projection(inst: QInstance, a: Ray, cones=None):
    """Projection route: (surrounded, witness TangentRay or None)."""
    local = cones_containing(inst, a, cones)
    if inst.n == 2:
        covered = set()
        for c in local:
            covered |= tangent_sides_1d(a, c.generators)
        for sign in (1, -1):
            if sign not in covered:
                r = line_direction(a)
                return False, TangentRay(a, primitive((sign * r[0], sign * r[1])))
        return True, None
    if inst.n != 3:
        raise ValueError("local surround decisions are implemented for n in {2, 3}")
    chart = TangentChart.at(a)
    planar = [[chart.to_plane(g) for g in c.generators] for c in local]
    ok, w = cones_cover_plane(planar)
    return ok, None if ok else chart.lift(w)


def critical_tangent_directions(a: Ray, vectors: Sequence, chart: TangentChart) -> list:
    """Tangent directions to probe: every projected generator and every gap between them."""
    crit = sort_angular(chart.to_plane(v) for v in vectors)
    if not crit:
        return [(1, 0)]
    out = []
    for idx, c in enumerate(crit):
        out.append(c)
        if len(crit) == 1:
            out.append(primitive((-c[0], -c[1])))
        else:
            out.append(gap_probe(c, crit[(idx + 1) % len(crit)]))
    return out


def surrounded_by_perturbation(inst: QInstance, a: Ray, cones=None):
    """Perturbation route: every critical tangent direction d must have some
    cone containing a + eps*d for all small eps."""
    cones = enumerate_cones(inst) if cones is None else cones
    local = cones_containing(inst, a, cones)
    if inst.n == 2:
        r = line_direction(a)
        for sign in (1, -1):
            d = (sign * r[0], sign * r[1])
            if not any(perturbed_member(a, d, c.generators) for c in local):
                return False, TangentRay(a, primitive(d))
        return True, None
    chart = TangentChart.at(a)
    gens = [g for c in local for g in c.generators]
    for w in critical_tangent_directions(a, gens, chart):
        d = chart.lift(w)
        if not any(perturbed_member(a, d.coords, c.generators) for c in local):
            return False, d
    return True, None


def is_surrounded(inst: QInstance, a: Ray, cones=None) -> bool:
    return surrounded_by_projection(inst, a, cones)[0]
