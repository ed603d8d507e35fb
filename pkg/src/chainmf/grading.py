"""Finitely generated abelian grading groups and the maximal grading of a chain polynomial.

A group is given by a presentation (generators, integer relation rows) and is
put in canonical form once, through a Smith normal form ``U M V = D``.  An
element with generator coordinates ``x`` (a row vector) has canonical
coordinates ``x V``: the entries at positions with ``d_i = 1`` vanish, those
with ``d_i > 1`` are reduced modulo ``d_i`` and the rest form the free part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp


class GradingError(ValueError):
    pass


class NonPositiveExponent(GradingError):
    pass


class GroupMismatch(GradingError):
    pass


class RankError(GradingError):
    pass


class NonPositiveWeight(GradingError):
    pass


IntMatrix = List[List[int]]


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: Optional[int] = None):
    """Return ``(U, D, V)`` with ``U M V = D`` and D in Smith form.

    ``U`` and ``V`` are unimodular; the nonzero diagonal entries of ``D`` are
    positive and each divides the next.  ``ncols`` is needed only when ``m``
    has no rows.
    """
    rows = [list(map(int, r)) for r in m]
    nrows = len(rows)
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for a matrix without rows")
        ncols = len(rows[0])
    if nrows == 0 or ncols == 0 or all(c == 0 for r in rows for c in r):
        return _identity(nrows), [[0] * ncols for _ in range(nrows)], _identity(ncols)
    d, u, v = smith_normal_decomp(Matrix(rows))
    U = [[int(c) for c in u.row(i)] for i in range(nrows)]
    D = [[int(c) for c in d.row(i)] for i in range(nrows)]
    V = [[int(c) for c in v.row(i)] for i in range(ncols)]
    # normalize signs so the diagonal is nonnegative
    for i in range(min(nrows, ncols)):
        if D[i][i] < 0:
            D[i][i] = -D[i][i]
            U[i] = [-c for c in U[i]]
    return U, D, V


def matmul(a: IntMatrix, b: IntMatrix, inner: Optional[int] = None) -> IntMatrix:
    if inner is None:
        inner = len(b)
    ncols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(ncols)]
            for i in range(len(a))]


def _inverse_unimodular(v: IntMatrix) -> IntMatrix:
    inv = Matrix(v).inv()
    return [[int(c) for c in inv.row(i)] for i in range(len(v))]


@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    relations: Tuple[Tuple[int, ...], ...] = ()
    generator_names: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.generator_count < 1:
            raise GradingError("a presentation needs at least one generator")
        for r in self.relations:
            if len(r) != self.generator_count:
                raise GradingError("relation length does not match generator count")


class GradedGroup:
    """Canonical form of a finitely generated abelian group.

    Elements are ``GroupElement`` values with coordinates
    ``(free_0, ..., free_{rank-1}, t_0, ..., t_k)`` where ``t_i`` lies in
    ``[0, torsion_invariants[i])``.
    """

    def __init__(self, presentation: GroupPresentation):
        self.presentation = presentation
        m = presentation.generator_count
        _, D, V = smith_normal_form(presentation.relations, ncols=m)
        diag = [D[i][i] if i < len(D) else 0 for i in range(m)]
        torsion_cols = [i for i in range(m) if diag[i] > 1]
        free_cols = [i for i in range(m) if diag[i] == 0]
        self._V = V
        self._Vinv = _inverse_unimodular(V)
        self._free_cols = free_cols
        self._torsion_cols = torsion_cols
        self._diag = diag
        self.rank = len(free_cols)
        self.torsion_invariants = tuple(diag[i] for i in torsion_cols)
        # reduction_map[g] = canonical coordinates (unreduced) of generator g
        self.reduction_map = tuple(
            tuple(V[g][c] for c in free_cols + torsion_cols) for g in range(m))
        self._orient = [1] * self.rank

    def __repr__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion_invariants]
        return "GradedGroup(" + (" + ".join(parts) or "0") + ")"

    def __eq__(self, other):
        return isinstance(other, GradedGroup) and self.presentation == other.presentation

    def __hash__(self):
        return hash(self.presentation)

    def _set_orientation(self, free_signs: Sequence[int]) -> None:
        # flips the sign of free coordinates; only used right after construction
        self._orient = list(free_signs)
        self.reduction_map = tuple(
            tuple(c * free_signs[i] if i < self.rank else c for i, c in enumerate(row))
            for row in self.reduction_map)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        coords = list(coords)
        if len(coords) != self.rank + len(self.torsion_invariants):
            raise GradingError("coordinate vector has wrong length")
        for i, d in enumerate(self.torsion_invariants):
            coords[self.rank + i] %= d
        return GroupElement(self, tuple(coords))

    def from_generators(self, x: Sequence[int]) -> "GroupElement":
        """Image of the generator-coordinate vector ``x``."""
        n = len(self.reduction_map[0]) if self.reduction_map else 0
        out = [0] * n
        for g, c in enumerate(x):
            if c:
                row = self.reduction_map[g]
                for i in range(n):
                    out[i] += c * row[i]
        return self.element(out)

    def generator(self, g: int) -> "GroupElement":
        x = [0] * self.presentation.generator_count
        x[g] = 1
        return self.from_generators(x)

    def lift(self, e: "GroupElement") -> List[int]:
        """Some generator-coordinate vector mapping to ``e``."""
        m = self.presentation.generator_count
        full = [0] * m
        for i, col in enumerate(self._free_cols):
            full[col] = e.coords[i] * self._orient[i]
        for i, col in enumerate(self._torsion_cols):
            full[col] = e.coords[self.rank + i]
        return [sum(full[k] * self._Vinv[k][g] for k in range(m)) for g in range(m)]

    @property
    def zero(self) -> "GroupElement":
        return self.element([0] * (self.rank + len(self.torsion_invariants)))


@dataclass(frozen=True)
class GroupElement:
    group: GradedGroup = field(compare=False, repr=False)
    coords: Tuple[int, ...]

    def _check(self, other: "GroupElement") -> None:
        if other.group is not self.group and other.group != self.group:
            raise GroupMismatch("elements of different groups")

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.coords == other.coords and (
            other.group is self.group or other.group == self.group)

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GroupElement":
        return self.group.element([-a for a in self.coords])

    def __mul__(self, k: int) -> "GroupElement":
        return self.group.element([k * a for a in self.coords])

    __rmul__ = __mul__

    @property
    def free_part(self) -> Tuple[int, ...]:
        return self.coords[:self.group.rank]

    @property
    def torsion_part(self) -> Tuple[int, ...]:
        return self.coords[self.group.rank:]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> dict:
        return {"free": list(self.free_part), "torsion": list(self.torsion_part)}


class MaximalGrading:
    """The maximal grading group of ``x1^a1 + x1 x2^a2 + ... + x_{n-1} x_n^an``.

    Generators are ordered ``x_1, ..., x_n, f``.  The free coordinate is
    oriented so that ``f`` has positive free part.
    """

    def __init__(self, exponents: Sequence[int]):
        exponents = tuple(int(a) for a in exponents)
        for a in exponents:
            if a < 1:
                raise NonPositiveExponent(f"exponent {a} < 1")
        n = len(exponents)
        rels = []
        for i, a in enumerate(exponents):
            row = [0] * (n + 1)
            row[n] = 1
            row[i] -= a
            if i > 0:
                row[i - 1] -= 1
            rels.append(tuple(row))
        names = tuple(f"x{i + 1}" for i in range(n)) + ("f",)
        self.exponents = exponents
        self.group = GradedGroup(GroupPresentation(n + 1, tuple(rels), names))
        if self.group.rank != 1:
            raise RankError(f"maximal grading has rank {self.group.rank}")
        f = self.group.generator(n)
        if f.free_part[0] < 0:
            self.group._set_orientation([-1])
        self.x = tuple(self.group.generator(i) for i in range(n))
        self.f = self.group.generator(n)
        self._f_free = self.f.free_part[0]
        if n and min(self.free_weight(x) for x in self.x) <= 0:
            raise NonPositiveWeight(f"variable weights are not positive for {exponents}")

    @property
    def n(self) -> int:
        return len(self.exponents)

    def free_weight(self, e: GroupElement) -> Fraction:
        return free_weight(e, self.f)

    def __repr__(self):
        return f"MaximalGrading({list(self.exponents)})"


def free_weight(e: GroupElement, f: GroupElement) -> Fraction:
    """Projection to the free quotient, normalized so that ``f`` has weight 1."""
    if e.group.rank != 1:
        raise RankError(f"free_weight needs a rank-1 group, got rank {e.group.rank}")
    if f.free_part[0] == 0:
        raise RankError("normalizing element has zero free part")
    return Fraction(e.free_part[0], f.free_part[0])


@lru_cache(maxsize=None)
def build_maximal_grading(exponents: Tuple[int, ...]) -> MaximalGrading:
    """Cached constructor; ``exponents`` must be a tuple."""
    return MaximalGrading(tuple(exponents))


def embed(e: GroupElement, source: MaximalGrading, target: MaximalGrading) -> GroupElement:
    """Inclusion of gradings ``x_i -> x_i``, ``f -> f`` for an extended exponent vector."""
    k, m = source.n, target.n
    if m < k or target.exponents[:k] != source.exponents:
        raise GroupMismatch(
            f"{list(target.exponents)} does not extend {list(source.exponents)}")
    if e.group != source.group:
        raise GroupMismatch("element does not belong to the source grading")
    x = source.group.lift(e)
    y = x[:k] + [0] * (m - k) + [x[k]]
    return target.group.from_generators(y)
