"""Exact covering decision for n = 3 from the six surround problems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .geometry import (
    GeneralizedLine,
    Membership,
    Ray,
    TangentRay,
    cone_member,
    cones_cover_plane,
    cross,
    dot,
    expand_lines,
    member2,
    orientation,
    tangent_project,
)
from .instance import QInstance, enumerate_cones, generators_for
from .planar import CoveringDecision, SurroundVerdict
from .surround import (
    TangentChart,
    surrounded_by_perturbation,
    surrounded_by_projection,
)


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SigmaPrimeBlock:
    selector: int  # complementary cone <x_i, x_j, a'> containing the zoom point
    status: Membership
    degenerate: bool
    lines: tuple  # (GeneralizedLine, GeneralizedLine) of TangentRay


@dataclass(frozen=True)
class SurroundProblem:
    instance: QInstance
    index: int
    side: str
    zoom_point: Ray
    others: tuple  # the two remaining indices, ascending
    sigma: tuple  # GeneralizedLine of TangentRay per other index
    sigma_prime: tuple  # SigmaPrimeBlock
    degenerate_events: tuple

    @property
    def opposite(self) -> Ray:
        return self.instance.other(self.index, self.side)


def _other_side(side: str) -> str:
    return "t" if side == "s" else "s"


def build_surround_problem(inst: QInstance, index: int, side: str) -> SurroundProblem:
    if inst.n != 3:
        raise ValueError("surround problems are built for n = 3")
    a = inst.point(index, side)
    a_opp = inst.other(index, side)
    others = tuple(i for i in range(3) if i != index)
    events = []
    if a == a_opp:
        events.append(f"inseparable: s{index + 1} = t{index + 1}")
    if a == -a_opp:
        events.append(f"antipodal partner: {side}{index + 1}")
    for i in others:
        for sd in ("s", "t"):
            p = inst.point(i, sd)
            if p == a:
                events.append(f"coincident: {sd}{i + 1} = {side}{index + 1}")
            elif p == -a:
                events.append(f"antipodal: {sd}{i + 1} = -{side}{index + 1}")
    proj = {(i, sd): tangent_project(a, inst.point(i, sd)) for i in others for sd in ("s", "t")}
    opp_bar = tangent_project(a, a_opp)
    sigma = tuple(GeneralizedLine(proj[(i, "s")], proj[(i, "t")]) for i in others)
    blocks = []
    for sel in range(8):
        if bool(sel >> index & 1) == (side == "t"):
            continue  # cones through the zoom point itself belong to sigma
        gens = generators_for(inst, sel)
        m = cone_member(a, gens)
        if not m.inside:
            continue
        chosen = [(i, "t" if sel >> i & 1 else "s") for i in others]
        degenerate = orientation(gens) == 0
        if degenerate:
            events.append(f"flat simplex {_label(sel)}")
        lines = tuple(GeneralizedLine(proj[c], opp_bar) for c in chosen)
        blocks.append(SigmaPrimeBlock(sel, m.status, degenerate, lines))
    return SurroundProblem(inst, index, side, a, others, sigma, tuple(blocks), tuple(events))


def _label(sel: int) -> str:
    return "<" + ",".join(f"{'t' if sel >> i & 1 else 's'}{i + 1}" for i in range(3)) + ">"


def surround_general(problem: SurroundProblem) -> SurroundVerdict:
    """Normative surround decision (tagged GENERAL).

    Non-degenerate problems are decided by planar coverage of the projected
    sums; any degeneracy (zero projections, flat simplices, coincidences)
    sends the whole problem through the symbolic-perturbation route.
    """
    a = problem.zoom_point
    inst = problem.instance
    degenerate = bool(problem.degenerate_events) or any(
        tr.is_zero for line in problem.sigma for tr in (line.u, line.v)
    )
    if degenerate:
        ok, witness = surrounded_by_perturbation(inst, a)
        notes = ("decided by perturbation",) + problem.degenerate_events
        return SurroundVerdict(a, ok, "GENERAL" if ok else None, witness, notes)
    chart = TangentChart.at(a)
    cones = expand_lines(problem.sigma)
    for block in problem.sigma_prime:
        cones.extend(expand_lines(block.lines))
    planar = [[chart.to_plane(g) for g in cone] for cone in cones]
    ok, w = cones_cover_plane(planar)
    return SurroundVerdict(a, ok, "GENERAL" if ok else None, None if ok else chart.lift(w))


# -- the six-case classifier ---------------------------------------------------


def _open_edge(p: Ray, u: Ray, v: Ray) -> bool:
    """p in the relative interior of the minor arc spanned by u and v."""
    c = cross(u, v)
    if not any(c) or dot(p, c) != 0:
        return False
    return dot(cross(p, v), c) > 0 and dot(cross(u, p), c) > 0


class _Local:
    """Chart coordinates of every projected point around one zoom point."""

    def __init__(self, problem: SurroundProblem):
        self.p = problem
        self.inst = problem.instance
        self.a = problem.zoom_point
        self.a_opp = problem.opposite
        self.chart = TangentChart.at(self.a)
        self.bar = {
            (i, sd): self.chart.to_plane(self.inst.point(i, sd))
            for i in problem.others
            for sd in ("s", "t")
        }
        self.opp_bar = self.chart.to_plane(self.a_opp)

    def covers(self, *pairs) -> bool:
        lines = [GeneralizedLine(u, v) for u, v in pairs]
        return cones_cover_plane(expand_lines(lines))[0]

    def pair(self, i):
        return self.bar[(i, "s")], self.bar[(i, "t")]

    def choices(self):
        i, j = self.p.others
        for si in ("s", "t"):
            for sj in ("s", "t"):
                yield (i, si), (j, sj)

    def ray(self, key) -> Ray:
        return self.inst.point(*key)


def _same_ray2(u, v) -> bool:
    if not any(u) or not any(v):
        return False
    return u[0] * v[1] == u[1] * v[0] and u[0] * v[0] + u[1] * v[1] > 0


def _case1(L: _Local):
    i, j = L.p.others
    return L.covers(L.pair(i), L.pair(j))


def _case2(L: _Local):
    for x, y in L.choices():
        if cone_member(L.a, [L.ray(x), L.ray(y), L.a_opp]).status is Membership.INTERIOR:
            return True
    return False


def _roles(L: _Local):
    i, j = L.p.others
    return ((i, j), (j, i))


def _case3(L: _Local):
    for i, j in _roles(L):
        for sd in ("s", "t"):
            x = (i, sd)
            if _open_edge(L.a, L.ray(x), L.a_opp) and L.covers((L.bar[x], L.opp_bar), L.pair(j)):
                return True
    return False


def _case4(L: _Local):
    for i, j in _roles(L):
        for sd in ("s", "t"):
            x = (i, sd)
            if L.ray(x) == L.a:
                x_opp = L.bar[(i, _other_side(sd))]
                if L.covers((x_opp, L.opp_bar), L.pair(j)):
                    return True
    return False


def _case5(L: _Local):
    for i, j in _roles(L):
        for sd in ("s", "t"):
            x = (i, sd)
            if not _open_edge(L.a, L.ray(x), L.a_opp):
                continue
            xi_opp = L.bar[(i, _other_side(sd))]
            for sj in ("s", "t"):
                y = L.bar[(j, sj)]
                y_opp = L.bar[(j, _other_side(sj))]
                if _same_ray2(y_opp, L.opp_bar) and L.covers((xi_opp, y), (L.opp_bar, y)):
                    return True
    return False


def _case6(L: _Local):
    for x, y in L.choices():
        if not _open_edge(L.a, L.ray(x), L.ray(y)):
            continue
        for (ki, si), (kj, sj) in ((x, y), (y, x)):
            xi_opp = L.bar[(ki, _other_side(si))]
            xj, xj_opp = L.bar[(kj, sj)], L.bar[(kj, _other_side(sj))]
            antipode = (-xi_opp[0], -xi_opp[1])
            excluded = not any(antipode) or member2(antipode, [xj, xj_opp])
            if excluded:
                continue
            if L.covers((L.bar[x], L.bar[y]), (xj_opp, L.opp_bar)):
                return True
    return False


_CASES = (
    ("P3-1", _case1),
    ("P3-2", _case2),
    ("P3-3", _case3),
    ("P3-4", _case4),
    ("P3-5", _case5),
    ("P3-6", _case6),
)


def _run_cases(problem: SurroundProblem, cases) -> SurroundVerdict:
    L = _Local(problem)
    for tag, test in cases:
        if test(L):
            return SurroundVerdict(problem.zoom_point, True, tag)
    general = surround_general(problem)
    notes = ()
    if general.surrounded:
        notes = ("case list missed a surrounded point",)
    return SurroundVerdict(problem.zoom_point, False, None, general.witness, notes)


def surround_cases_3d(problem: SurroundProblem) -> SurroundVerdict:
    return _run_cases(problem, _CASES)


def surround_cases_3d_nondegenerate(problem: SurroundProblem) -> SurroundVerdict:
    if any(c.degenerate for c in enumerate_cones(problem.instance)):
        raise PreconditionError("instance has a degenerate complementary cone")
    return _run_cases(problem, _CASES[:3])


def is_covering_3d(inst: QInstance, with_cases: bool = False) -> CoveringDecision:
    if inst.n != 3:
        raise ValueError("is_covering_3d needs n = 3")
    bad = inst.inseparable_indices()
    if bad:
        return CoveringDecision(False, (bad[0], "s"), {}, "inseparable")
    verdicts = {}
    failing = None
    for i, side, _ in inst.points():
        problem = build_surround_problem(inst, i, side)
        v = surround_general(problem)
        if with_cases:
            c = surround_cases_3d(problem)
            v = SurroundVerdict(v.point, v.surrounded, c.case_fired or v.case_fired, v.witness, v.notes)
        verdicts[(i, side)] = v
        if not v.surrounded and failing is None:
            failing = (i, side)
    return CoveringDecision(failing is None, failing, verdicts, "spatial-surround")


# -- simplicial partition -------------------------------------------------------


def _sigma_alone(inst: QInstance, index: int, side: str) -> bool:
    a = inst.point(index, side)
    others = [i for i in range(inst.n) if i != index]
    if inst.n == 2:
        from .planar import _tangent_coord

        o = others[0]
        return _tangent_coord(a, inst.s[o]) * _tangent_coord(a, inst.t[o]) < 0
    chart = TangentChart.at(a)
    lines = [
        GeneralizedLine(chart.to_plane(inst.s[i]), chart.to_plane(inst.t[i])) for i in others
    ]
    return cones_cover_plane(expand_lines(lines))[0]


def _sigma_prime_empty(inst: QInstance, index: int, side: str) -> bool:
    a = inst.point(index, side)
    for sel in range(1 << inst.n):
        if bool(sel >> index & 1) == (side == "t"):
            continue
        if cone_member(a, generators_for(inst, sel)).inside:
            return False
    return True


def check_partition(inst: QInstance) -> bool:
    if inst.n not in (2, 3):
        raise ValueError("check_partition needs n in {2, 3}")
    return all(
        _sigma_alone(inst, i, side) and _sigma_prime_empty(inst, i, side)
        for i, side, _ in inst.points()
    )


def separation_condition(inst: QInstance) -> bool:
    """Every pair {s_i, t_i} strictly separated by every hyperplane spanned by
    one choice from each of the other pairs."""
    n = inst.n
    for i in range(n):
        others = [k for k in range(n) if k != i]
        for sel in range(1 << (n - 1)):
            chosen = [inst.t[k] if sel >> b & 1 else inst.s[k] for b, k in enumerate(others)]

            def side_of(p):
                cols = list(chosen)
                cols.insert(i, p)
                return orientation(cols)

            if side_of(inst.s[i]) * side_of(inst.t[i]) >= 0:
                return False
    return True
