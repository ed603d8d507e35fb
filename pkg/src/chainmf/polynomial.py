"""Exact multivariate polynomials over Q graded by a rank-one abelian group."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .grading import (
    GradedGroup,
    GroupElement,
    GroupPresentation,
    MaximalGrading,
    NonPositiveWeight,
    build_maximal_grading,
    embed,
    free_weight,
)

Monomial = Tuple[int, ...]


def monomial_key(m: Monomial):
    """Graded-lexicographic sort key: total degree first, then x1 before x2."""
    return (sum(m), tuple(-e for e in m))


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class GradedRing:
    """``Q[x_1..x_n]`` with ``deg x_i`` in a rank-one group and a distinguished degree ``f``.

    All variable weights must be positive; graded components are then finite.
    """

    def __init__(self, group: GradedGroup, var_degrees: Sequence[GroupElement],
                 f_degree: GroupElement, grading: Optional[MaximalGrading] = None):
        self.group = group
        self.var_degrees = tuple(var_degrees)
        self.f_degree = f_degree
        self.grading = grading
        self.nvars = len(self.var_degrees)
        self.weights = tuple(free_weight(d, f_degree) for d in self.var_degrees)
        if any(w <= 0 for w in self.weights):
            raise NonPositiveWeight(f"variable weights {self.weights} are not all positive")
        self._components: Dict[GroupElement, Tuple[Monomial, ...]] = {}
        self.zero = GradedPolynomial(self, {})
        self.one = GradedPolynomial(self, {(0,) * self.nvars: 1})

    @property
    def exponents(self) -> Optional[Tuple[int, ...]]:
        return self.grading.exponents if self.grading is not None else None

    def __repr__(self):
        if self.grading is not None:
            return f"chain_ring({list(self.grading.exponents)})"
        return f"GradedRing(nvars={self.nvars}, {self.group})"

    # -- degrees ---------------------------------------------------------
    def degree_of(self, m: Monomial) -> GroupElement:
        d = self.group.zero
        for e, deg in zip(m, self.var_degrees):
            if e:
                d = d + deg * e
        return d

    def weight(self, d: GroupElement) -> Fraction:
        return free_weight(d, self.f_degree)

    def graded_component_basis(self, d: GroupElement) -> Tuple[Monomial, ...]:
        """Monomials of degree exactly ``d``, in graded-lex order."""
        hit = self._components.get(d)
        if hit is not None:
            return hit
        target = self.weight(d)
        out: List[Monomial] = []
        if target >= 0:
            n = self.nvars
            w = self.weights
            exps = [0] * n

            def rec(i: int, remaining: Fraction):
                if i == n:
                    if remaining == 0:
                        m = tuple(exps)
                        if self.degree_of(m) == d:
                            out.append(m)
                    return
                e = 0
                while e * w[i] <= remaining:
                    exps[i] = e
                    rec(i + 1, remaining - e * w[i])
                    e += 1
                exps[i] = 0

            rec(0, target)
        out.sort(key=monomial_key)
        res = tuple(out)
        self._components[d] = res
        return res

    # -- constructors ----------------------------------------------------
    def var(self, i: int) -> "GradedPolynomial":
        """The variable ``x_i`` (1-indexed)."""
        m = [0] * self.nvars
        m[i - 1] = 1
        return GradedPolynomial(self, {tuple(m): 1})

    def const(self, c) -> "GradedPolynomial":
        return GradedPolynomial(self, {(0,) * self.nvars: c})

    def monomial(self, m: Monomial, c=1) -> "GradedPolynomial":
        return GradedPolynomial(self, {tuple(m): c})

    def poly(self, terms) -> "GradedPolynomial":
        if isinstance(terms, dict):
            return GradedPolynomial(self, terms)
        return GradedPolynomial(self, dict(terms))


def chain_ring(exponents: Sequence[int]) -> GradedRing:
    return _chain_ring(tuple(int(a) for a in exponents))


@lru_cache(maxsize=None)
def _chain_ring(exponents: Tuple[int, ...]) -> GradedRing:
    g = build_maximal_grading(exponents)
    return GradedRing(g.group, g.x, g.f, grading=g)


def graded_ring(nvars: int, relations: Sequence[Sequence[int]]) -> GradedRing:
    """Ring graded by ``(Z x_1 + ... + Z x_n + Z f) / relations``.

    Each relation is a coefficient row over the generators ``x_1..x_n, f``.
    """
    pres = GroupPresentation(nvars + 1, tuple(tuple(r) for r in relations),
                             tuple(f"x{i + 1}" for i in range(nvars)) + ("f",))
    group = GradedGroup(pres)
    f = group.generator(nvars)
    if group.rank == 1 and f.free_part[0] < 0:
        group._set_orientation([-1])
        f = group.generator(nvars)
    return GradedRing(group, [group.generator(i) for i in range(nvars)], f)


def extension_map(source: GradedRing, target: GradedRing):
    """Return the degree map for the inclusion of chain rings ``S^n -> S^m``."""
    if source.grading is None or target.grading is None:
        if source is target:
            return lambda d: d
        raise ValueError("extension needs chain rings")
    return lambda d: embed(d, source.grading, target.grading)


class GradedPolynomial:
    """Immutable polynomial: a map from exponent tuples to nonzero rationals."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: GradedRing, terms: Dict[Monomial, object]):
        self.ring = ring
        self.terms = {m: _norm(c) for m, c in terms.items() if c != 0}
        self._hash = None

    # -- basic protocol --------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GradedPolynomial):
            return self.terms == other.terms and self.ring.nvars == other.ring.nvars
        if isinstance(other, (int, Rational)):
            return self.terms == ({(0,) * self.ring.nvars: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in reversed(self.sorted_terms()):
            mono = "*".join(
                (f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}") for i, e in enumerate(m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "GradedPolynomial":
        if isinstance(other, GradedPolynomial):
            if other.ring.nvars != self.ring.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GradedPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GradedPolynomial):
            if other == 0:
                return self.ring.zero
            return GradedPolynomial(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return GradedPolynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "GradedPolynomial":
        return self * c

    def substitute_zero(self, i: int) -> "GradedPolynomial":
        """Set ``x_i`` (1-indexed) to zero."""
        return GradedPolynomial(self.ring, {m: c for m, c in self.terms.items() if m[i - 1] == 0})

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    # -- grading ---------------------------------------------------------
    def is_homogeneous(self) -> Optional[GroupElement]:
        """Common degree of all terms; the zero polynomial is homogeneous of no fixed degree."""
        deg = None
        for m in self.terms:
            d = self.ring.degree_of(m)
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg

    def is_homogeneous_of(self, d: GroupElement) -> bool:
        return all(self.ring.degree_of(m) == d for m in self.terms)

    def extend(self, ring: GradedRing) -> "GradedPolynomial":
        """Same polynomial viewed in a ring with more variables."""
        pad = (0,) * (ring.nvars - self.ring.nvars)
        if ring.nvars < self.ring.nvars:
            raise ValueError("target ring has fewer variables")
        return GradedPolynomial(ring, {m + pad: c for m, c in self.terms.items()})

    def to_json(self) -> list:
        out = []
        for m, c in self.sorted_terms():
            c = Fraction(c)
            out.append([list(m), c.numerator, c.denominator])
        return out

    @classmethod
    def from_json(cls, ring: GradedRing, data: Iterable) -> "GradedPolynomial":
        return cls(ring, {tuple(m): Fraction(num, den) for m, num, den in data})


def chain_polynomial(exponents: Sequence[int]) -> GradedPolynomial:
    """``x1^a1 + x1 x2^a2 + ... + x_{n-1} x_n^an`` in the chain ring; zero for n = 0."""
    ring = chain_ring(exponents)
    p = ring.zero
    for i, a in enumerate(exponents):
        m = [0] * ring.nvars
        m[i] = a
        if i > 0:
            m[i - 1] = 1
        p = p + ring.monomial(tuple(m))
    return p


def degree_of(ring: GradedRing, m: Monomial) -> GroupElement:
    return ring.degree_of(m)
