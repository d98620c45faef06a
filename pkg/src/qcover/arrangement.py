"""Exact arrangement of the simplex edges on the 2-sphere (n = 3).

Vertices are primitive integer rays, so coincidence is tuple equality.
Faces come from a rotation system: around each vertex the outgoing edges
are ordered by the sign of det(v, d1, d2) of their tangent directions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from functools import cmp_to_key
from typing import Optional

from .geometry import Ray, TangentRay, cross, dot, perturbed_member, primitive, tangent_project
from .instance import QInstance, enumerate_cones
from .surround import is_surrounded


@dataclass(frozen=True)
class ArcSegment:
    endpoints: tuple  # vertex indices (i, j)
    circle_normal: Ray
    origins: tuple  # facet labels such as "s1-t2"


@dataclass(frozen=True)
class Cell:
    boundary: tuple  # cyclic vertex indices
    edges: tuple  # arc indices, aligned with boundary
    is_ghost: bool
    covered: Optional[bool] = None
    representative: Optional[tuple] = None  # (vertex index, TangentRay)
    multiplicity: Optional[int] = None

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.boundary)


@dataclass(frozen=True)
class CellComplex:
    instance: QInstance
    vertices: tuple  # Ray
    original: tuple  # per vertex: labels of the s/t points it equals
    arcs: tuple  # ArcSegment
    cells: tuple  # Cell
    components: int
    notes: tuple = ()

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.arcs)

    @property
    def F(self) -> int:
        isolated = sum(1 for d in self.degrees() if d == 0)
        return len(self.cells) + isolated - (self.components - 1)

    def euler(self) -> int:
        return self.V - self.E + self.F

    def degrees(self) -> list[int]:
        deg = [0] * self.V
        for arc in self.arcs:
            for v in arc.endpoints:
                deg[v] += 1
        return deg

    def ghost_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.is_ghost]

    def uncovered_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.covered is False]


# -- exact spherical predicates ---------------------------------------------------


def on_arc(p, u, v, normal, strict: bool = False) -> bool:
    """p on the minor arc from u to v (u, v independent, normal = u x v)."""
    if dot(p, normal) != 0:
        return False
    lam = dot(cross(p, v), normal)
    mu = dot(cross(u, p), normal)
    if strict:
        return lam > 0 and mu > 0
    return lam >= 0 and mu >= 0 and (lam > 0 or mu > 0)


def _arc_order(normal):
    def cmp(p, q):
        s = dot(cross(p, q), normal)
        return -1 if s > 0 else (1 if s < 0 else 0)

    return cmp_to_key(cmp)


def _tangent_cmp(v):
    def half(d, ref):
        s = dot(v, cross(ref, d))
        return 0 if s > 0 or (s == 0 and dot(ref, d) > 0) else 1

    def make(ref):
        def cmp(d1, d2):
            h1, h2 = half(d1, ref), half(d2, ref)
            if h1 != h2:
                return h1 - h2
            s = dot(v, cross(d1, d2))
            return -1 if s > 0 else (1 if s < 0 else 0)

        return cmp

    return make


def sector_probe(v, d_out, d_in) -> tuple:
    """Tangent direction strictly inside the counterclockwise sector from d_out to d_in at v."""
    c = dot(v, cross(d_out, d_in))
    if c > 0:
        return primitive(tuple(a + b for a, b in zip(d_out, d_in)))
    if c < 0:
        return primitive(tuple(-a - b for a, b in zip(d_out, d_in)))
    if dot(d_out, d_in) < 0:
        return primitive(cross(v, d_out))
    return primitive(tuple(-a for a in d_out))


# -- construction ----------------------------------------------------------------


def _facets(inst: QInstance):
    names = [(i, sd) for i in range(3) for sd in ("s", "t")]
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            (i, si), (j, sj) = names[a], names[b]
            if i == j:
                continue
            yield f"{si}{i + 1}-{sj}{j + 1}", inst.point(i, si), inst.point(j, sj)


def build_arrangement(inst: QInstance) -> CellComplex:
    if inst.n != 3:
        raise ValueError("arrangements are built for n = 3 only")
    notes = []
    vindex: dict = {}
    vertices: list = []
    original: list = []

    def add_vertex(r: tuple, label: Optional[str] = None) -> int:
        if r not in vindex:
            vindex[r] = len(vertices)
            vertices.append(r)
            original.append(set())
        k = vindex[r]
        if label:
            original[k].add(label)
        return k

    for i, sd, p in inst.points():
        add_vertex(p.coords, f"{sd}{i + 1}")

    raw: dict = {}
    for label, u, v in _facets(inst):
        if u == v:
            notes.append(f"zero-length facet {label} dropped")
            continue
        if u == -v:
            notes.append(f"facet {label} has antipodal ends: a line, kept as its two endpoints")
            continue
        key = tuple(sorted((u.coords, v.coords)))
        raw.setdefault(key, []).append(label)

    arcs = []
    for (u, v), labels in raw.items():
        normal = primitive(cross(u, v))
        arcs.append((u, v, normal, tuple(labels)))

    # intersections of great-circle arcs that are not co-circular
    for a in range(len(arcs)):
        ua, va, na, _ = arcs[a]
        for b in range(a + 1, len(arcs)):
            ub, vb, nb, _ = arcs[b]
            c = cross(na, nb)
            if not any(c):
                continue
            p = primitive(c)
            for q in (p, tuple(-x for x in p)):
                if on_arc(q, ua, va, na) and on_arc(q, ub, vb, nb):
                    add_vertex(q)

    segments: dict = {}
    for u, v, normal, labels in arcs:
        on = [w for w in vertices if on_arc(w, u, v, normal)]
        on.sort(key=_arc_order(normal))
        for p, q in zip(on, on[1:]):
            key = tuple(sorted((vindex[p], vindex[q])))
            if key in segments:
                seg_normal, prev = segments[key]
                segments[key] = (seg_normal, prev | set(labels))
            else:
                seg_normal = primitive(cross(vertices[key[0]], vertices[key[1]]))
                segments[key] = (seg_normal, set(labels))
    seg_list = [
        ArcSegment(key, Ray(normal), tuple(sorted(labels)))
        for key, (normal, labels) in sorted(segments.items())
    ]
    overlap = [s for s in seg_list if len(s.origins) > 1]
    if overlap:
        notes.append(f"{len(overlap)} arc pieces shared by several facets were merged")

    cells, components = _extract_faces(vertices, seg_list)
    orig_set = {p.coords for _, _, p in inst.points()}
    cells = tuple(
        replace(c, is_ghost=not any(vertices[v] in orig_set for v in c.boundary)) for c in cells
    )
    return CellComplex(
        inst,
        tuple(Ray(v) for v in vertices),
        tuple(tuple(sorted(o)) for o in original),
        tuple(seg_list),
        cells,
        components,
        tuple(notes),
    )


def _extract_faces(vertices, segs):
    nv = len(vertices)
    out: list = [[] for _ in range(nv)]  # (neighbour, arc index)
    for idx, s in enumerate(segs):
        a, b = s.endpoints
        out[a].append((b, idx))
        out[b].append((a, idx))

    rotation = []
    position = []
    for v in range(nv):
        vv = vertices[v]
        dirs = {w: tangent_project(Ray(vv), vertices[w]).coords for w, _ in out[v]}
        if out[v]:
            ref = dirs[out[v][0][0]]
            ordered = sorted(out[v], key=lambda e: cmp_to_key(_tangent_cmp(vv)(ref))(dirs[e[0]]))
        else:
            ordered = []
        rotation.append(ordered)
        position.append({w: k for k, (w, _) in enumerate(ordered)})

    # components by union-find over arcs
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in segs:
        a, b = s.endpoints
        parent[find(a)] = find(b)
    components = len({find(v) for v in range(nv)})

    seen = set()
    cells = []
    for u in range(nv):
        for v, _ in rotation[u]:
            if (u, v) in seen:
                continue
            boundary, edges = [], []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                boundary.append(a)
                rot = rotation[b]
                k = position[b][a]
                nxt, _ = rot[k - 1]  # clockwise neighbour of the twin
                edges.append(next(i for w, i in rotation[a] if w == b))
                a, b = b, nxt
            cells.append(Cell(tuple(boundary), tuple(edges), False))
    return tuple(cells), components


# -- classification ------------------------------------------------------------------


def cell_corner(cc: CellComplex, cell: Cell, k: int = 0) -> tuple:
    """(vertex index, in-sector tangent probe, d_out, d_in) at corner k of a cell."""
    b = cell.boundary
    v = b[k]
    nxt = b[(k + 1) % len(b)]
    prv = b[k - 1]
    vv = cc.vertices[v]
    d_out = tangent_project(vv, cc.vertices[nxt]).coords
    d_in = tangent_project(vv, cc.vertices[prv]).coords
    return v, sector_probe(vv.coords, d_out, d_in), d_out, d_in


def classify_cells(cc: CellComplex) -> CellComplex:
    cones = enumerate_cones(cc.instance)
    cells = []
    for cell in cc.cells:
        v, probe, _, _ = cell_corner(cc, cell)
        vv = cc.vertices[v]
        hits = sum(1 for c in cones if perturbed_member(vv.coords, probe, c.generators))
        cells.append(
            replace(
                cell,
                covered=hits > 0,
                representative=(v, TangentRay(vv, probe)),
                multiplicity=hits,
            )
        )
    return replace(cc, cells=tuple(cells))


@dataclass(frozen=True)
class ArrangementDecision:
    covered: bool
    uncovered_cells: tuple
    complex: CellComplex


def exact_covering_oracle_3d(inst: QInstance) -> ArrangementDecision:
    """Covered iff every cell is: arc points and vertices lie on simplex facets."""
    cc = classify_cells(build_arrangement(inst))
    bad = tuple(c for c in cc.cells if not c.covered)
    return ArrangementDecision(not bad, bad, cc)


@dataclass
class LocalizationReport:
    cells: int = 0
    cells_with_surrounded_vertex: int = 0
    violations: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def verify_localization(cc: CellComplex) -> LocalizationReport:
    """Check: every cell having a surrounded vertex implies every cell covered."""
    if any(c.covered is None for c in cc.cells):
        cc = classify_cells(cc)
    cones = enumerate_cones(cc.instance)
    surrounded = [is_surrounded(cc.instance, v, cones) for v in cc.vertices]
    rep = LocalizationReport(cells=len(cc.cells))
    for k, cell in enumerate(cc.cells):
        if any(surrounded[v] for v in cell.boundary):
            rep.cells_with_surrounded_vertex += 1
            if not cell.covered:
                # a surrounded vertex has a covered neighbourhood meeting the cell
                rep.violations.append(k)
    if rep.cells_with_surrounded_vertex == rep.cells and not all(c.covered for c in cc.cells):
        rep.violations.append("antecedent holds but sphere not covered")
    return rep


# -- interior probes --------------------------------------------------------------------


def _arc_hits(p, q, cc: CellComplex, skip_vertex=None) -> bool:
    """Whether the minor arc p->q meets any arrangement edge other than at skip_vertex."""
    n1 = cross(p, q)
    if not any(n1):
        return True
    for s in cc.arcs:
        a, b = (cc.vertices[i].coords for i in s.endpoints)
        c = cross(n1, s.circle_normal.coords)
        if not any(c):
            return True  # co-circular with an edge: reject rather than resolve
        x = primitive(c)
        for y in (x, tuple(-t for t in x)):
            if y == skip_vertex:
                continue
            if on_arc(y, p, q, n1) and on_arc(y, a, b, s.circle_normal.coords):
                return True
    return False


def cell_probes(cc: CellComplex, cell: Cell, count: int, rng: random.Random) -> list:
    """Exact interior points of a cell near its first corner.

    Each probe is v*N + d with d a random strictly positive combination of
    sector directions; it is kept only when the arc back to v crosses no edge
    and the probe itself lies on no edge.
    """
    v, g, d_out, d_in = cell_corner(cc, cell)
    vv = cc.vertices[v].coords
    c = dot(vv, cross(d_out, d_in))
    if c > 0:
        parts = [(d_out, d_in)]
    elif c < 0 or dot(d_out, d_in) < 0:
        parts = [(d_out, g), (g, d_in)]
    else:
        r = primitive(cross(vv, d_out))
        m = tuple(-x for x in d_out)
        mr = tuple(-x for x in r)
        parts = [(d_out, r), (r, m), (m, mr), (mr, d_out)]
    scale = max(max(abs(x) for x in d) for d in (d_out, d_in, g)) + 1
    probes = []
    attempts = 0
    while len(probes) < count and attempts < count * 50:
        attempts += 1
        x, y = rng.choice(parts)
        alpha, beta = rng.randint(1, 97), rng.randint(1, 97)
        d = tuple(alpha * a + beta * b for a, b in zip(x, y))
        n = scale * 200 * (1 << rng.randint(0, 6))
        p = tuple(n * a + b for a, b in zip(vv, d))
        if not any(p):
            continue
        p = primitive(p)
        if any(on_arc(p, *(cc.vertices[i].coords for i in s.endpoints), s.circle_normal.coords) for s in cc.arcs):
            continue
        if _arc_hits(p, vv, cc, skip_vertex=vv):
            continue
        probes.append(p)
    return probes
