"""Q-covering instances and their complementary cones."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import Ray, rank


class DegenerateInstanceError(ValueError):
    pass


@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


def as_matrix(M) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else RationalMatrix(tuple(map(tuple, M)))


@dataclass(frozen=True)
class QInstance:
    """Two n-lists of rays; cone j picks s_i or t_i for every index i."""

    s: tuple[Ray, ...]
    t: tuple[Ray, ...]

    def __post_init__(self):
        s = tuple(r if isinstance(r, Ray) else Ray(tuple(r)) for r in self.s)
        t = tuple(r if isinstance(r, Ray) else Ray(tuple(r)) for r in self.t)
        n = len(s)
        if len(t) != n or n == 0:
            raise ValueError("s and t must be nonempty lists of equal length")
        if any(r.dim != n for r in s + t):
            raise ValueError(f"all rays must have dimension {n}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return len(self.s)

    def point(self, i: int, side: str) -> Ray:
        return self.s[i] if side == "s" else self.t[i]

    def other(self, i: int, side: str) -> Ray:
        return self.t[i] if side == "s" else self.s[i]

    def points(self):
        """All (index, side, ray) triples in the order s_1, t_1, s_2, ..."""
        for i in range(self.n):
            yield i, "s", self.s[i]
            yield i, "t", self.t[i]

    def inseparable_indices(self) -> list[int]:
        return [i for i in range(self.n) if self.s[i] == self.t[i]]

    def scaled(self, s_factors: Sequence, t_factors: Sequence) -> "QInstance":
        """Rescale generators by positive rationals (the rays do not change)."""
        return QInstance(
            tuple(Ray(tuple(Fraction(c) * x for x in r)) for c, r in zip(s_factors, self.s)),
            tuple(Ray(tuple(Fraction(c) * x for x in r)) for c, r in zip(t_factors, self.t)),
        )


@dataclass(frozen=True)
class ComplementaryCone:
    selector: int
    generators: tuple[Ray, ...]
    degenerate: bool

    def picks_t(self, i: int) -> bool:
        return bool(self.selector >> i & 1)

    def label(self) -> str:
        return "<" + ",".join(
            f"{'t' if self.picks_t(i) else 's'}{i + 1}" for i in range(len(self.generators))
        ) + ">"


def generators_for(inst: QInstance, selector: int) -> tuple[Ray, ...]:
    return tuple(inst.t[i] if selector >> i & 1 else inst.s[i] for i in range(inst.n))


def enumerate_cones(inst: QInstance) -> list[ComplementaryCone]:
    cones = []
    for sel in range(1 << inst.n):
        gens = generators_for(inst, sel)
        cones.append(ComplementaryCone(sel, gens, rank(gens) < inst.n))
    return cones


def instance_from_matrix(M) -> QInstance:
    """s_i = e_i and t_i = -(column i of M), the columns of (I | -M)."""
    M = as_matrix(M)
    n = M.n
    s, t = [], []
    for i in range(n):
        col = M.column(i)
        if not any(col):
            raise DegenerateInstanceError(
                f"degenerate instance: vanishing generator (column {i + 1} of M is zero)"
            )
        s.append(Ray(tuple(int(j == i) for j in range(n))))
        t.append(Ray(tuple(-x for x in col)))
    return QInstance(tuple(s), tuple(t))
