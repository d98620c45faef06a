"""Seeded random instances and matrices.

Uniform instances draw integer coordinates in [-9, 9].  The biased profiles
start from a uniform draw and then plant coincidences and incidences that
uniform sampling almost never produces.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .geometry import Ray
from .instance import QInstance, RationalMatrix
from .lcp import is_P

PROFILES = ("uniform", "degenerate-biased", "ghost-biased")
BOUND = 9


def random_vector(rng: random.Random, n: int, bound: int = BOUND) -> tuple:
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v):
            return v


def uniform_instance(rng: random.Random, n: int) -> QInstance:
    return QInstance(
        tuple(Ray(random_vector(rng, n)) for _ in range(n)),
        tuple(Ray(random_vector(rng, n)) for _ in range(n)),
    )


def _points(inst: QInstance) -> dict:
    return {(i, sd): p.coords for i, sd, p in inst.points()}


def _rebuild(pts: dict, n: int) -> Optional[QInstance]:
    try:
        return QInstance(
            tuple(Ray(pts[(i, "s")]) for i in range(n)),
            tuple(Ray(pts[(i, "t")]) for i in range(n)),
        )
    except ValueError:
        return None


def _mutate(rng: random.Random, pts: dict, n: int) -> None:
    keys = sorted(pts)
    target = rng.choice(keys)
    others = [k for k in keys if k[0] != target[0]]
    kind = rng.choice(
        ["coincide", "antipode", "edge", "edge", "face", "coplanar", "axis", "partner", "tangent"]
    )
    x = pts[rng.choice(others)]
    y = pts[rng.choice(others)]
    z = pts[rng.choice(keys)]
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    if kind == "coincide":
        new = x
    elif kind == "antipode":
        new = tuple(-c for c in x)
    elif kind == "edge":
        new = tuple(a * p + b * q for p, q in zip(x, y))
    elif kind == "face" and n == 3:
        new = tuple(p + q + r for p, q, r in zip(x, y, z))
    elif kind == "coplanar":
        new = tuple(a * p - b * q for p, q in zip(x, y))
    elif kind == "axis":
        new = list(pts[target])
        new[rng.randrange(n)] = 0
        new = tuple(new)
    elif kind == "partner":
        partner = (target[0], "t" if target[1] == "s" else "s")
        new = tuple(-c for c in pts[partner])
    else:
        # edge from the partner of another pair: a point on <x, y'> arcs
        new = tuple(a * p - b * q for p, q in zip(x, z))
    if any(new):
        pts[target] = new


def degenerate_instance(rng: random.Random, n: int) -> QInstance:
    while True:
        inst = uniform_instance(rng, n)
        pts = _points(inst)
        for _ in range(rng.randint(1, 3)):
            _mutate(rng, pts, n)
        out = _rebuild(pts, n)
        if out is not None:
            return out


def ghost_instance(rng: random.Random, n: int = 3) -> QInstance:
    """Draws biased toward long crossing facets.

    Points are pushed toward a common great circle band (small third
    coordinate after a random signed axis permutation), which makes
    facets long and mutually crossing.
    """
    perm = list(range(3))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in range(3)]

    def draw():
        while True:
            v = [rng.randint(-BOUND, BOUND), rng.randint(-BOUND, BOUND), rng.randint(-2, 2)]
            if any(v):
                break
        w = [0, 0, 0]
        for k in range(3):
            w[perm[k]] = signs[k] * v[k]
        return Ray(tuple(w))

    return QInstance(tuple(draw() for _ in range(3)), tuple(draw() for _ in range(3)))


def instance_for_profile(rng: random.Random, n: int, profile: str) -> QInstance:
    if profile == "uniform":
        return uniform_instance(rng, n)
    if profile == "degenerate-biased":
        return degenerate_instance(rng, n)
    if profile == "ghost-biased":
        if n != 3:
            raise ValueError("ghost-biased profile needs n = 3")
        return ghost_instance(rng)
    raise ValueError(f"unknown profile {profile!r}")


def random_matrix(rng: random.Random, n: int, lo: int = -BOUND, hi: int = BOUND) -> RationalMatrix:
    return RationalMatrix(
        tuple(tuple(Fraction(rng.randint(lo, hi)) for _ in range(n)) for _ in range(n))
    )


def random_nonneg_matrix(rng: random.Random, n: int) -> RationalMatrix:
    """Nonnegative entries with plenty of zeros, so zero diagonals are common."""
    rows = []
    for _ in range(n):
        rows.append(
            tuple(
                Fraction(0) if rng.random() < 0.35 else Fraction(rng.randint(1, BOUND), rng.randint(1, 3))
                for _ in range(n)
            )
        )
    return RationalMatrix(tuple(rows))


def random_p_matrix(rng: random.Random, n: int) -> RationalMatrix:
    """Rejection-sample a P-matrix (positive diagonal biases acceptance)."""
    while True:
        rows = []
        for i in range(n):
            rows.append(
                tuple(
                    Fraction(rng.randint(1, BOUND)) if i == j else Fraction(rng.randint(-BOUND, BOUND))
                    for j in range(n)
                )
            )
        M = RationalMatrix(tuple(rows))
        if is_P(M):
            return M
