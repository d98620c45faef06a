from fractions import Fraction

import pytest
import sympy

from oracles import angular_union_covers, oracle_status, scan_directions
from qcover.geometry import (
    GeneralizedLine,
    Membership,
    Ray,
    TangentFlag,
    cone_member,
    det,
    dot,
    expand_lines,
    gap_probe,
    member2,
    nonneg_combination,
    orientation,
    perturbed_member,
    plane_coverage,
    primitive,
    rank,
    ray_equal,
    sort_angular,
    tangent_project,
)

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def rvec(rng, n, b=9):
    while True:
        v = tuple(rng.randint(-b, b) for _ in range(n))
        if any(v):
            return v


def test_primitive_and_ray_normalization():
    assert primitive((2, 4, -6)) == (1, 2, -3)
    assert primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    assert Ray((0, -5)).coords == (0, -1)
    with pytest.raises(ValueError):
        primitive((0, 0))
    assert -Ray((1, 2)) == Ray((-1, -2))


@pytest.mark.parametrize(
    "u,v,expected",
    [((1, 2), (2, 4), True), ((1, 2), (-1, -2), False), ((1, 0, 0), (1, 0, 1), False)],
)
def test_ray_equal(u, v, expected):
    assert ray_equal(Ray(u), Ray(v)) is expected
    assert (Ray(u) == Ray(v)) is expected


def test_ray_equal_dimension_mismatch():
    with pytest.raises(ValueError):
        ray_equal(Ray((1, 0)), Ray((1, 0, 0)))


@pytest.mark.parametrize(
    "a,v,coords,flag",
    [
        ((0, 0, 1), (1, 0, 1), (1, 0, 0), TangentFlag.PROPER),
        ((0, 0, 1), (0, 0, 2), (0, 0, 0), TangentFlag.ZERO_PARALLEL),
        ((0, 0, 1), (0, 0, -3), (0, 0, 0), TangentFlag.ZERO_ANTIPODAL),
        ((1, 1, 0), (1, 0, 0), (1, -1, 0), TangentFlag.PROPER),
    ],
)
def test_tangent_project_examples(a, v, coords, flag):
    t = tangent_project(Ray(a), v)
    assert t.coords == coords and t.flag is flag


def test_tangent_project_orthogonal_and_matches_formula(rng):
    for _ in range(500):
        n = rng.choice((2, 3, 4))
        a, v = Ray(rvec(rng, n)), rvec(rng, n)
        t = tangent_project(a, v)
        assert dot(t.coords, a.coords) == 0
        # the unreduced formula (a.a) v - (v.a) a is a positive multiple
        w = tuple(dot(a, a) * x - dot(v, a) * y for x, y in zip(v, a.coords))
        if any(w):
            assert ray_equal(Ray(w), Ray(t.coords))
        else:
            assert t.is_zero


@pytest.mark.parametrize(
    "cols,sign", [([(1, 0), (0, 1)], 1), ([(0, 1), (1, 0)], -1), ([(1, 1), (2, 2)], 0)]
)
def test_orientation_examples(cols, sign):
    assert orientation(cols) == sign


def test_det_and_rank_against_sympy(rng):
    for _ in range(300):
        n = rng.choice((1, 2, 3, 4, 5))
        cols = [rvec(rng, n, 5) for _ in range(n)]
        if rng.random() < 0.3 and n > 1:
            cols[-1] = tuple(2 * x - y for x, y in zip(cols[0], cols[1 % n]))
        M = sympy.Matrix(cols).T
        assert det(cols) == M.det()
        assert rank(cols) == M.rank()
        if n > 1:
            swapped = [cols[1], cols[0]] + cols[2:]
            assert orientation(swapped) == -orientation(cols)


def test_cone_member_examples():
    e1, e2 = (1, 0), (0, 1)
    v = cone_member((1, 1), [e1, e2])
    assert v.status is Membership.INTERIOR and v.certificate == (1, 1)
    assert cone_member((1, 0), [e1, e2]).status is Membership.BOUNDARY
    assert cone_member((-1, -1), [e1, e2]).status is Membership.OUTSIDE
    # flat cone: e1, -e1 and (1,1,1) span the half-plane {y = z, y >= 0}
    flat = [E1, (-1, 0, 0), (1, 1, 1)]
    assert cone_member((0, 3, 3), flat).status is Membership.BOUNDARY
    assert cone_member((0, 1, 2), flat).status is Membership.OUTSIDE


def test_cone_member_matches_fourier_motzkin(rng):
    names = {"interior": Membership.INTERIOR, "boundary": Membership.BOUNDARY, "outside": Membership.OUTSIDE}
    for _ in range(400):
        n = rng.choice((2, 3))
        k = rng.choice((n - 1, n, n, n + 1))
        gens = [rvec(rng, n, 4) for _ in range(k)]
        if rng.random() < 0.3:
            q = tuple(sum(rng.randint(0, 2) * g[i] for g in gens) for i in range(n))
            if not any(q):
                q = gens[0]
        else:
            q = rvec(rng, n, 4)
        got = cone_member(q, gens)
        assert got.status is names[oracle_status(q, gens)], (q, gens)
        if got.inside:
            lam = got.certificate
            assert all(x >= 0 for x in lam)
            assert len(lam) == k and all(
                sum(l * g[i] for l, g in zip(lam, gens)) == q[i] for i in range(n)
            )


def test_cone_member_scale_invariant(rng):
    for _ in range(2000):
        gens = [rvec(rng, 3, 5) for _ in range(3)]
        q = rvec(rng, 3, 5)
        base = cone_member(q, gens).status
        c = Fraction(rng.randint(1, 50), rng.randint(1, 50))
        factors = [Fraction(rng.randint(1, 20), rng.randint(1, 20)) for _ in gens]
        scaled = [tuple(f * x for x in g) for f, g in zip(factors, gens)]
        assert cone_member(tuple(c * x for x in q), scaled).status is base


def test_nonneg_combination_none_when_infeasible():
    assert nonneg_combination([(1, 0), (0, 1)], (-1, 0)) is None
    assert nonneg_combination([(1, 0), (-1, 0)], (0, 0)) == (0, 0)


def test_perturbed_member_examples():
    assert perturbed_member((1, 0), (0, 1), [(1, 0), (0, 1)])
    assert not perturbed_member((1, 0), (0, -1), [(1, 0), (0, 1)])
    flat = [E1, (-1, 0, 0), (1, 1, 1)]
    assert not perturbed_member(E3, (1, 1, 0), flat)
    with pytest.raises(ValueError):
        perturbed_member((1, 0), (0, 0), [(1, 0)])


def test_perturbed_member_matches_tiny_epsilon(rng):
    # coefficients are at most 4 in size, so every sign change happens far
    # above eps = 1e-9
    eps = Fraction(1, 10**9)
    for _ in range(300):
        n = rng.choice((2, 3))
        gens = [rvec(rng, n, 4) for _ in range(n)]
        a = gens[0] if rng.random() < 0.5 else tuple(x + y for x, y in zip(gens[0], gens[-1]))
        if not any(a):
            continue
        d = rvec(rng, n, 4)
        p = tuple(x + eps * y for x, y in zip(a, d))
        assert perturbed_member(a, d, gens) == (oracle_status(p, gens) != "outside")


def test_sort_angular_and_gap_probe():
    assert sort_angular([(0, -1), (1, 0), (-1, 0), (0, 1), (2, 0)]) == [(1, 0), (0, 1), (-1, 0), (0, -1)]
    assert gap_probe((1, 0), (0, 1)) == (1, 1)
    assert gap_probe((0, 1), (1, 0)) == (-1, -1)
    assert gap_probe((1, 0), (-1, 0)) == (0, 1)


@pytest.mark.parametrize(
    "lines,covered",
    [
        ([((1, 0), (-1, 0)), ((0, 1), (0, -1))], True),
        ([((1, 0), (0, 1)), ((1, 1), (2, 1))], False),
        ([((1, 0), (0, 1)), ((1, 1), (-1, 1))], False),
    ],
)
def test_plane_coverage_examples(lines, covered):
    v = plane_coverage([GeneralizedLine(Ray(u), Ray(w)) for u, w in lines])
    assert v.covered is covered
    if not covered:
        cones = expand_lines([GeneralizedLine(u, w) for u, w in lines])
        assert not any(member2(v.gap_witness.coords, c) for c in cones)


def test_plane_coverage_witness_in_lower_half_plane():
    v = plane_coverage([GeneralizedLine(Ray((1, 0)), Ray((0, 1))), GeneralizedLine(Ray((1, 1)), Ray((2, 1)))])
    assert v.gap_witness.coords[1] < 0


def test_plane_coverage_errors():
    with pytest.raises(ValueError):
        plane_coverage([])
    with pytest.raises(ValueError):
        plane_coverage([GeneralizedLine((1, 0, 0), (0, 1, 0))])
    with pytest.raises(ValueError):
        plane_coverage([GeneralizedLine((0, 0), (1, 0))])


def test_plane_coverage_matches_scan_and_intervals(rng):
    probes = scan_directions()
    for _ in range(150):
        lines = [GeneralizedLine(Ray(rvec(rng, 2)), Ray(rvec(rng, 2))) for _ in range(2)]
        v = plane_coverage(lines)
        cones = expand_lines(lines)
        gens = {Ray(g) for c in cones for g in c}
        scan = all(
            any(member2(p, c) for c in cones) for p in probes if Ray(p) not in gens
        )
        assert v.covered == scan == angular_union_covers(cones)
