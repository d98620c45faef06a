from fractions import Fraction

import numpy as np
import pytest

from oracles import fm_in_cone, lcp_brute, p_brute, r0_brute
from qcover.generators import random_matrix, random_nonneg_matrix, random_p_matrix
from qcover.geometry import Ray, cone_member
from qcover.instance import (
    DegenerateInstanceError,
    QInstance,
    RationalMatrix,
    enumerate_cones,
    instance_from_matrix,
)
from qcover.lcp import (
    ConeTable,
    QStatus,
    check_solution,
    classify,
    complementary_columns,
    is_P,
    is_R0,
    lcp_solve_all,
    murty_nonneg_q,
    probe_directions,
    sample_coverage,
)

I2 = [[1, 0], [0, 1]]
I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_instance_from_identity_and_negative_identity():
    inst = instance_from_matrix(I2)
    assert [r.coords for r in inst.s] == [(1, 0), (0, 1)]
    assert [r.coords for r in inst.t] == [(-1, 0), (0, -1)]
    neg = instance_from_matrix([[-1, 0], [0, -1]])
    assert neg.t == neg.s and neg.inseparable_indices() == [0, 1]


def test_instance_from_q_not_r0(q_not_r0):
    inst = instance_from_matrix(q_not_r0)
    assert [r.coords for r in inst.t] == [(-2, -4, -3), (-1, 0, 0), (1, 1, 1)]


def test_zero_column_rejected():
    with pytest.raises(DegenerateInstanceError, match="column 2"):
        instance_from_matrix([[1, 0], [2, 0]])


def test_instance_validation():
    with pytest.raises(ValueError):
        QInstance((Ray((1, 0)),), (Ray((1, 0)), Ray((0, 1))))
    with pytest.raises(ValueError):
        QInstance((Ray((1, 0, 0)),), (Ray((1, 0, 0)),))
    with pytest.raises(ValueError):
        RationalMatrix(((1, 2),))


def test_enumerate_cones_flags(q_not_r0):
    cones = enumerate_cones(instance_from_matrix(I2))
    assert len(cones) == 4 and not any(c.degenerate for c in cones)
    cones = enumerate_cones(instance_from_matrix(q_not_r0))
    assert len(cones) == 8
    assert sorted(c.label() for c in cones if c.degenerate) == ["<s1,t2,s3>", "<s1,t2,t3>"]
    one = enumerate_cones(QInstance((Ray((1,)),), (Ray((-1,)),)))
    assert len(one) == 2


def test_scaled_instance_has_same_rays(rng):
    inst = instance_from_matrix(random_matrix(rng, 3))
    scaled = inst.scaled([Fraction(3, 2)] * 3, [Fraction(1, 7), 5, 2])
    assert scaled == inst


# -- LCP ------------------------------------------------------------------------


def test_lcp_identity_examples():
    sols = lcp_solve_all((-1, -1), I2)
    assert len(sols) == 1 and sols[0].w == (0, 0) and sols[0].z == (1, 1)
    sols = lcp_solve_all((1, 1), I2)
    assert len(sols) == 1 and sols[0].w == (1, 1) and sols[0].z == (0, 0)


def test_lcp_q_not_r0_has_solution(q_not_r0):
    sols = lcp_solve_all((1, 1, 1), q_not_r0)
    assert sols and all(check_solution(s, (1, 1, 1), q_not_r0) for s in sols)


def test_lcp_certificates_match_brute_force(rng):
    for _ in range(150):
        n = rng.choice((1, 2, 3))
        M = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        q = [rng.randint(-4, 4) for _ in range(n)]
        sols = lcp_solve_all(q, M)
        assert all(check_solution(s, q, M) for s in sols)
        assert sorted(s.selector for s in sols) == lcp_brute(q, M)


def test_lcp_view_equals_cone_view(rng):
    for _ in range(2000):
        n = rng.choice((2, 3))
        M = random_matrix(rng, n, -4, 4)
        q = tuple(rng.randint(-4, 4) for _ in range(n))
        in_some = any(fm_in_cone(q, complementary_columns(M, sel)) for sel in range(1 << n)) if any(q) else True
        assert bool(lcp_solve_all(q, M)) == in_some


def test_lcp_dimension_mismatch():
    with pytest.raises(ValueError):
        lcp_solve_all((1, 2, 3), I2)


@pytest.mark.parametrize(
    "M,expected", [(I2, True), ([[1, 0], [0, 0]], False), ([[1, 0], [3, 0]], False)]
)
def test_is_R0_examples(M, expected):
    assert is_R0(M) is expected


def test_is_R0_q_not_r0(q_not_r0):
    assert is_R0(q_not_r0) is False


def test_is_R0_against_support_enumeration(rng):
    for _ in range(300):
        n = rng.choice((1, 2, 3))
        M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        assert is_R0(M) == r0_brute(M), M


@pytest.mark.parametrize("M,expected", [(I3, True), ([[1, 2], [3, 4]], False), ([[-1, 0], [0, -1]], False)])
def test_is_P_examples(M, expected):
    assert is_P(M) is expected


def test_is_P_against_sympy(rng):
    for _ in range(300):
        n = rng.choice((1, 2, 3, 4))
        M = [[rng.randint(-3, 5) if i != j else rng.randint(0, 6) for j in range(n)] for i in range(n)]
        assert is_P(M) == p_brute(M)


@pytest.mark.parametrize(
    "M,expected", [([[1, 2], [3, 4]], True), ([[0, 1], [1, 0]], False), ([[1, -1], [0, 1]], None)]
)
def test_murty_examples(M, expected):
    assert murty_nonneg_q(M) is expected


def test_probe_directions_deterministic_and_primitive():
    a = probe_directions(3, 1000, 5)
    b = probe_directions.__wrapped__(3, 1000, 5)
    assert (a == b).all() and a.shape == (1000, 3)
    assert all(np.gcd.reduce(np.abs(r)) == 1 for r in a)
    grid = [tuple(r) for r in a[:500]]
    assert len(set(grid)) == len(grid)


def test_cone_table_matches_exact_membership(rng):
    for _ in range(15):
        inst = instance_from_matrix(random_matrix(rng, 3, -3, 3)) if rng.random() < 0.5 else None
        if inst is None:
            try:
                inst = instance_from_matrix([[0, 1, 1], [1, 0, 1], [rng.randint(-2, 2), 1, 0]])
            except DegenerateInstanceError:
                continue
        probes = probe_directions(3, 400, rng.randint(0, 100))
        mask = ConeTable(enumerate_cones(inst)).covered(probes)
        for r, hit in zip(probes, mask):
            q = tuple(int(x) for x in r)
            assert hit == any(cone_member(q, c.generators).inside for c in enumerate_cones(inst))


def test_sample_coverage_examples(q_not_r0):
    assert sample_coverage(instance_from_matrix(I2), 500).fraction == 1
    neg = sample_coverage(instance_from_matrix([[-1, 0], [0, -1]]), 500)
    assert neg.fraction < 1
    assert neg.witnesses and all(min(w.coords) < 0 for w in neg.witnesses)
    assert len(neg.witnesses) <= 100
    assert sample_coverage(instance_from_matrix(q_not_r0), 10_000).fraction == 1


def test_sample_coverage_rejects_empty():
    with pytest.raises(ValueError):
        sample_coverage(instance_from_matrix(I2), 0)


def test_classify_examples(q_not_r0):
    c = classify(q_not_r0)
    assert (c.is_Q, c.is_R0, c.is_P) == (QStatus.YES, False, False)
    c = classify(I3)
    assert (c.is_Q, c.is_P, c.is_R0) == (QStatus.YES, True, True)
    c = classify([[0, 1], [1, 0]])
    assert c.is_Q is QStatus.NO and c.murty_Q is False
    assert classify([[1, 0], [0, 0]]).method == "zero-column"


def test_classify_n1():
    assert classify([[1]]).is_Q is QStatus.YES
    assert classify([[Fraction(1, 3)]]).is_Q is QStatus.YES
    assert classify([[-2]]).is_Q is QStatus.NO


def test_classify_n4_is_sampled_only():
    M = [[int(i == j) for j in range(4)] for i in range(4)]
    c = classify(M, probe_count=300)
    assert c.is_Q is QStatus.SAMPLED_ONLY and c.sample.fraction == 1


def test_classify_invariant_under_t_rescaling(rng):
    for _ in range(60):
        M = random_matrix(rng, 3)
        base = classify(M).is_Q
        cols = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(3)]
        scaled = [[M[i, j] * cols[j] for j in range(3)] for i in range(3)]
        assert classify(scaled).is_Q is base


def test_p_matrices_are_q(rng):
    for _ in range(50):
        M = random_p_matrix(rng, rng.choice((2, 3)))
        assert classify(M).is_Q is QStatus.YES


def test_murty_matches_exact_on_small_run(rng):
    for _ in range(200):
        M = random_nonneg_matrix(rng, rng.choice((2, 3)))
        c = classify(M)
        assert c.murty_applicable
        assert c.murty_Q == (c.is_Q is QStatus.YES)
