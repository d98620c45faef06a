import random
from fractions import Fraction

import pytest

from qcover.generators import degenerate_instance, random_p_matrix, uniform_instance
from qcover.geometry import Ray, cone_member, dot, perturbed_member
from qcover.instance import QInstance, enumerate_cones, instance_from_matrix
from qcover.spatial import (
    PreconditionError,
    build_surround_problem,
    check_partition,
    is_covering_3d,
    separation_condition,
    surround_cases_3d,
    surround_cases_3d_nondegenerate,
    surround_general,
)
from qcover.surround import TangentChart, is_surrounded, surrounded_by_perturbation, surrounded_by_projection

I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

# Surround problems where the general decider finds a surrounded point and
# none of the six listed cases fires.  Each mixes two kinds of degeneracy.
CASE_LIST_GAPS = [
    # s1 = s2 = s3: the zoom point is a vertex of three flat and three full cones
    (((7, 5, 4), (9, 3, -8), (-9, -7, -2)), ((-1, 1, 1), (-1, 1, 1), (-1, 1, 1)), 0, "t"),
    # t2 = s3 and t2 on a facet of <t1,s2,t3>: coincidence plus edge incidence
    (((8, 6, -9), (-8, -5, 8), (7, 1, -4)), ((9, -5, -18), (7, 1, -4), (-1, 3, 7)), 1, "t"),
    # s2 on edges of <s1,t2,s3> and <t1,t2,t3> at once
    (((1, -9, 5), (5, 4, 1), (10, -3, 1)), ((20, 5, 3), (-5, 7, 0), (4, 1, -6)), 1, "s"),
]


def make(s, t):
    return QInstance(tuple(Ray(x) for x in s), tuple(Ray(x) for x in t))


def probe_surrounded(inst, a, rng, count=1500):
    """Points a*N + d for random small d all lie in some cone."""
    cones = [c.generators for c in enumerate_cones(inst)]
    for _ in range(count):
        d = [rng.randint(-1000, 1000) for _ in range(3)]
        p = tuple(10**7 * x + y for x, y in zip(a.coords, d))
        if not any(cone_member(p, g).inside for g in cones):
            return False
    return True


def test_identity_problem_structure():
    inst = instance_from_matrix(I3)
    p = build_surround_problem(inst, 2, "s")
    sig = {frozenset((line.u.coords, line.v.coords)) for line in p.sigma}
    assert sig == {frozenset(((1, 0, 0), (-1, 0, 0))), frozenset(((0, 1, 0), (0, -1, 0)))}
    assert p.sigma_prime == ()


def test_q_not_r0_t3_has_sigma_prime(q_not_r0):
    p = build_surround_problem(instance_from_matrix(q_not_r0), 2, "t")
    assert p.sigma_prime


def test_coincidence_recorded():
    inst = make(((1, 0, 0), (0, 1, 0), (1, 0, 0)), ((-1, 0, 0), (0, -1, 0), (0, 0, -1)))
    p = build_surround_problem(inst, 2, "s")
    assert any(e.startswith("coincident") for e in p.degenerate_events)


def test_general_examples(q_not_r0):
    inst = instance_from_matrix(I3)
    v = surround_general(build_surround_problem(inst, 2, "s"))
    assert v.surrounded and v.case_fired == "GENERAL"
    inst2 = instance_from_matrix(q_not_r0)
    for i, side, _ in inst2.points():
        assert surround_general(build_surround_problem(inst2, i, side)).surrounded


def test_half_space_not_surrounded_with_witness():
    # t2 = e1 lies on the plane z = 0 and every other generator has z > 0,
    # so directions with z < 0 escape every cone near e1
    gens = [(1, 0, 1), (0, 1, 1), (-1, -1, 2), (2, -1, 1), (1, 0, 0), (1, 1, 3)]
    inst = make(gens[:3], gens[3:])
    p = build_surround_problem(inst, 1, "t")
    v = surround_general(p)
    assert not v.surrounded
    w = v.witness.coords
    assert dot(w, p.zoom_point.coords) == 0
    assert not any(perturbed_member(p.zoom_point.coords, w, c.generators) for c in enumerate_cones(inst))


def test_general_witness_is_exact_and_surrounded_is_probed(rng):
    for k in range(200):
        inst = uniform_instance(rng, 3) if k % 2 else degenerate_instance(rng, 3)
        i, side = rng.randrange(3), rng.choice("st")
        p = build_surround_problem(inst, i, side)
        v = surround_general(p)
        a = p.zoom_point
        if v.surrounded:
            assert probe_surrounded(inst, a, rng, 200)
        else:
            w = v.witness.coords
            assert dot(w, a.coords) == 0 and any(w)
            assert not any(perturbed_member(a.coords, w, c.generators) for c in enumerate_cones(inst))


def test_two_surround_routes_agree(rng):
    for k in range(120):
        inst = uniform_instance(rng, 3) if k % 2 else degenerate_instance(rng, 3)
        for _, _, a in inst.points():
            assert surrounded_by_projection(inst, a)[0] == surrounded_by_perturbation(inst, a)[0]


def test_tangent_chart_roundtrip(rng):
    for _ in range(200):
        a = Ray(tuple(rng.randint(-9, 9) for _ in range(2)) + (rng.randint(1, 9),))
        chart = TangentChart.at(a)
        v = tuple(rng.randint(-9, 9) for _ in range(3))
        w = chart.to_plane(v)
        if any(w):
            back = chart.lift(w)
            assert dot(back.coords, a.coords) == 0
            assert chart.to_plane(back) == w


def test_case_examples():
    inst = instance_from_matrix(I3)
    assert surround_cases_3d(build_surround_problem(inst, 2, "s")).case_fired == "P3-1"


def test_case_2_interior_construction():
    # e3 = (s1 + s2 + t3) / 3 with s1, s2, t3 independent: e3 is interior to
    # <s1, s2, t3>; the other points are placed so that sigma alone fails
    rng = random.Random(11)
    for _ in range(500):
        s1 = tuple(rng.randint(-5, 5) for _ in range(3))
        s2 = tuple(rng.randint(-5, 5) for _ in range(3))
        t3 = tuple(3 * e - x - y for e, x, y in zip((0, 0, 1), s1, s2))
        t1 = tuple(rng.randint(-5, 5) for _ in range(3))
        t2 = tuple(rng.randint(-5, 5) for _ in range(3))
        try:
            inst = make((s1, s2, (0, 0, 1)), (t1, t2, t3))
        except ValueError:
            continue
        if cone_member((0, 0, 1), [s1, s2, t3]).status.value != "interior":
            continue
        p = build_surround_problem(inst, 2, "s")
        v = surround_cases_3d(p)
        if v.case_fired != "P3-1":
            assert v.case_fired == "P3-2"
            return
    pytest.fail("no instance with case 2 as first firing case")


def test_cases_match_general_on_uniform_instances(rng):
    for _ in range(1500):
        inst = uniform_instance(rng, 3)
        i, side = rng.randrange(3), rng.choice("st")
        p = build_surround_problem(inst, i, side)
        assert surround_cases_3d(p).surrounded == surround_general(p).surrounded


@pytest.mark.parametrize("s,t,i,side", CASE_LIST_GAPS)
def test_known_case_list_gaps(s, t, i, side):
    inst = make(s, t)
    p = build_surround_problem(inst, i, side)
    cases = surround_cases_3d(p)
    assert not cases.surrounded
    assert "case list missed a surrounded point" in cases.notes
    assert surround_general(p).surrounded
    assert probe_surrounded(inst, p.zoom_point, random.Random(0))


def test_nondegenerate_variant(q_not_r0, rng):
    inst = instance_from_matrix(I3)
    for i, side, _ in inst.points():
        p = build_surround_problem(inst, i, side)
        assert surround_cases_3d_nondegenerate(p) == surround_cases_3d(p)
    with pytest.raises(PreconditionError):
        surround_cases_3d_nondegenerate(build_surround_problem(instance_from_matrix(q_not_r0), 0, "s"))
    seen = 0
    while seen < 300:
        inst = uniform_instance(rng, 3)
        if any(c.degenerate for c in enumerate_cones(inst)):
            continue
        seen += 1
        p = build_surround_problem(inst, rng.randrange(3), rng.choice("st"))
        assert surround_cases_3d_nondegenerate(p).surrounded == surround_general(p).surrounded


def test_is_covering_examples(q_not_r0):
    assert is_covering_3d(instance_from_matrix(q_not_r0)).covered
    assert is_covering_3d(instance_from_matrix(I3)).covered
    octant = make(((1, 1, 1), (1, 2, 1), (2, 1, 1)), ((1, 1, 2), (3, 1, 1), (1, 3, 2)))
    assert not is_covering_3d(octant).covered


def test_inseparable_never_covered(rng):
    for _ in range(100):
        inst = uniform_instance(rng, 3)
        k = rng.randrange(3)
        t = list(inst.t)
        t[k] = inst.s[k]
        d = is_covering_3d(QInstance(inst.s, tuple(t)))
        assert not d.covered and d.method == "inseparable"


def test_scale_invariance(rng):
    for _ in range(100):
        inst = uniform_instance(rng, 3)
        f = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(6)]
        assert is_covering_3d(inst.scaled(f[:3], f[3:])).covered == is_covering_3d(inst).covered


def test_partition(q_not_r0, rng):
    assert check_partition(instance_from_matrix(I3))
    assert separation_condition(instance_from_matrix(I3))
    assert not check_partition(instance_from_matrix(q_not_r0))
    for _ in range(100):
        inst = instance_from_matrix(random_p_matrix(rng, 3)) if rng.random() < 0.5 else uniform_instance(rng, 3)
        if check_partition(inst):
            assert is_covering_3d(inst).covered
    with pytest.raises(ValueError):
        check_partition(QInstance((Ray((1,)),), (Ray((-1,)),)))


def test_p_matrix_partition_and_separation(rng):
    for _ in range(100):
        inst = instance_from_matrix(random_p_matrix(rng, 3))
        assert check_partition(inst)
        assert separation_condition(inst)


def test_is_surrounded_matches_decision(rng):
    for _ in range(100):
        inst = uniform_instance(rng, 3)
        if inst.inseparable_indices():
            continue
        all_ok = all(is_surrounded(inst, p) for _, _, p in inst.points())
        assert all_ok == is_covering_3d(inst).covered
