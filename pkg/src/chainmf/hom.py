"""Morphism spaces in the homotopy category of graded matrix factorizations.

A chain map ``E -> F[l]`` is determined by the coefficients of the monomials
allowed in each matrix entry (the graded component of the entry's required
degree).  The two commutation equations are linear in those coefficients,
and null-homotopic maps form the image of a second linear map.  Everything is
solved exactly over Q with fraction-free elimination.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .factorization import (
    FreeModule,
    MatrixFactorization,
    MfMorphism,
    PolyMatrix,
    ShapeMismatch,
    compose,
    identity,
    shift,
    twist,
)
from .grading import GroupElement
from .linalg import Echelon
from .polynomial import GradedPolynomial, GradedRing

Window = Tuple[int, int]


def _mono_times(p: GradedPolynomial, m, left: bool = True) -> Dict[tuple, object]:
    # polynomial multiplication is commutative; ``left`` only documents intent
    return {tuple(a + b for a, b in zip(m, pm)): c for pm, c in p.terms.items()}


class EntryCoordinates:
    """Coordinates for a list of matrices with prescribed entry degrees.

    Each block is ``(target twists, source twists, offset)``; entry ``(r, c)``
    has degree ``target[r] - source[c] + offset``.
    """

    def __init__(self, ring: GradedRing, blocks: Sequence[Tuple[FreeModule, FreeModule, Optional[GroupElement]]]):
        self.ring = ring
        self.shapes = []
        self.index: Dict[tuple, int] = {}
        self.labels: List[tuple] = []
        for b, (tgt, src, off) in enumerate(blocks):
            self.shapes.append((tgt.rank, src.rank))
            for r in range(tgt.rank):
                for c in range(src.rank):
                    d = tgt.twists[r] - src.twists[c]
                    if off is not None:
                        d = d + off
                    for m in ring.graded_component_basis(d):
                        key = (b, r, c, m)
                        self.index[key] = len(self.labels)
                        self.labels.append(key)

    @property
    def size(self) -> int:
        return len(self.labels)

    def vector(self, mats: Sequence[PolyMatrix]) -> Dict[int, object]:
        v = {}
        for b, M in enumerate(mats):
            for r in range(M.nrows):
                for c in range(M.ncols):
                    for m, coef in M.rows[r][c].terms.items():
                        k = self.index.get((b, r, c, m))
                        if k is None:
                            raise ShapeMismatch(f"entry ({b},{r},{c}) has a term of the wrong degree")
                        v[k] = coef
        return v

    def matrices(self, v: Dict[int, object]) -> List[PolyMatrix]:
        ring = self.ring
        terms = [[[{} for _ in range(nc)] for _ in range(nr)] for nr, nc in self.shapes]
        for k, coef in v.items():
            b, r, c, m = self.labels[k]
            terms[b][r][c][m] = coef
        return [PolyMatrix(ring, nr, nc, [[GradedPolynomial(ring, t) for t in row] for row in terms[b]])
                for b, (nr, nc) in enumerate(self.shapes)]


class HomComputation:
    """Chain maps ``E -> G`` and their null-homotopic subspace."""

    def __init__(self, E: MatrixFactorization, G: MatrixFactorization):
        if E.potential != G.potential:
            from .factorization import PotentialMismatch
            raise PotentialMismatch("Hom between factorizations of different potentials")
        self.source = E
        self.target = G
        ring = E.ring
        fdeg = E.f_degree
        self.coords = EntryCoordinates(ring, [(G.F1, E.F1, None), (G.F0, E.F0, None)])
        idx = self.coords.index

        # commutation equations, keyed by (equation, row, col, monomial)
        eqs: Dict[tuple, Dict[int, object]] = {}

        def put(key, u, c):
            row = eqs.setdefault(key, {})
            nc = row.get(u, 0) + c
            if nc:
                row[u] = nc
            else:
                row.pop(u, None)

        for u, (b, r, c, m) in enumerate(self.coords.labels):
            if b == 1:  # alpha0 entry
                for c2 in range(E.F1.rank):
                    for mm, cf in _mono_times(E.phi1.rows[c][c2], m).items():
                        put((0, r, c2, mm), u, cf)
                for r2 in range(G.F1.rank):
                    for mm, cf in _mono_times(G.phi0.rows[r2][r], m).items():
                        put((1, r2, c, mm), u, -cf)
            else:  # alpha1 entry
                for r2 in range(G.F0.rank):
                    for mm, cf in _mono_times(G.phi1.rows[r2][r], m).items():
                        put((0, r2, c, mm), u, -cf)
                for c2 in range(E.F0.rank):
                    for mm, cf in _mono_times(E.phi0.rows[c][c2], m).items():
                        put((1, r, c2, mm), u, cf)
        rows = [eqs[k] for k in sorted(eqs) if eqs[k]]
        self.chain_basis: List[Dict[int, int]] = linalg.nullspace(rows, self.coords.size)

        # image of homotopies h0: E0 -> G1, h1: E1(f) -> G0
        hcoords = EntryCoordinates(ring, [(G.F1, E.F0, None), (G.F0, E.F1, -fdeg)])
        self.homotopy = Echelon()
        self.homotopy_spanning: List[Dict[int, object]] = []
        for b, r, c, m in hcoords.labels:
            v: Dict[int, object] = {}

            def add(key, cf):
                k = idx[key]
                nc = v.get(k, 0) + cf
                if nc:
                    v[k] = nc
                else:
                    v.pop(k, None)

            if b == 0:  # h0 at (r, c): G1[r] <- E0[c]
                for r2 in range(G.F0.rank):
                    for mm, cf in _mono_times(G.phi1.rows[r2][r], m).items():
                        add((1, r2, c, mm), cf)
                for c2 in range(E.F1.rank):
                    for mm, cf in _mono_times(E.phi1.rows[c][c2], m).items():
                        add((0, r, c2, mm), cf)
            else:  # h1 at (r, c): G0[r] <- E1[c](f)
                for c2 in range(E.F0.rank):
                    for mm, cf in _mono_times(E.phi0.rows[c][c2], m).items():
                        add((1, r, c2, mm), cf)
                for r2 in range(G.F1.rank):
                    for mm, cf in _mono_times(G.phi0.rows[r2][r], m).items():
                        add((0, r2, c, mm), cf)
            if v and self.homotopy.add(v):
                self.homotopy_spanning.append(v)

        # representatives of the quotient, chosen greedily in basis order
        ech = self.homotopy.copy()
        self.representatives: List[Dict[int, object]] = []
        for v in self.chain_basis:
            if ech.add(v):
                self.representatives.append(v)

    @property
    def chain_dim(self) -> int:
        return len(self.chain_basis)

    @property
    def null_homotopic_dim(self) -> int:
        return self.homotopy.rank

    @property
    def dim(self) -> int:
        return self.chain_dim - self.null_homotopic_dim

    def morphism(self, v: Dict[int, object]) -> MfMorphism:
        a1, a0 = self.coords.matrices(v)
        return MfMorphism(self.source, self.target, a1, a0)

    def vector(self, m: MfMorphism) -> Dict[int, object]:
        return self.coords.vector([m.alpha1, m.alpha0])

    def is_null_homotopic_vector(self, v) -> bool:
        return self.homotopy.contains(v)


@dataclass
class HomSpace:
    source: MatrixFactorization
    target: MatrixFactorization
    shift: int
    basis: List[MfMorphism]
    chain_dim: int
    null_homotopic_dim: int

    @property
    def dim(self) -> int:
        return self.chain_dim - self.null_homotopic_dim


# memo: content keys make it independent of object identity; a lock keeps
# concurrent inserts from racing (values are deterministic either way)
_CACHE: Dict[tuple, HomComputation] = {}
_CACHE_LOCK = threading.Lock()


def clear_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()


def hom_computation(E: MatrixFactorization, G: MatrixFactorization) -> HomComputation:
    key = (E.key(), G.key())
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    hc = HomComputation(E, G)
    with _CACHE_LOCK:
        _CACHE.setdefault(key, hc)
    return hc


def hom_data(E: MatrixFactorization, F: MatrixFactorization, l: int = 0) -> HomComputation:
    return hom_computation(E, shift(F, l))


def chain_map_space(E, F, l: int = 0) -> List[MfMorphism]:
    hc = hom_data(E, F, l)
    return [hc.morphism(v) for v in hc.chain_basis]


def null_homotopic_subspace(E, F, l: int = 0) -> Tuple[int, List[MfMorphism]]:
    hc = hom_data(E, F, l)
    return hc.null_homotopic_dim, [hc.morphism(v) for v in hc.homotopy_spanning]


def hom_dim(E, F, l: int = 0) -> int:
    return hom_data(E, F, l).dim


def hom_basis(E, F, l: int = 0) -> HomSpace:
    hc = hom_data(E, F, l)
    return HomSpace(E, hc.target, l, [hc.morphism(v) for v in hc.representatives],
                    hc.chain_dim, hc.null_homotopic_dim)


def is_null_homotopic(m: MfMorphism) -> bool:
    hc = hom_computation(m.source, m.target)
    return hc.is_null_homotopic_vector(hc.vector(m))


def homotopic(m1: MfMorphism, m2: MfMorphism) -> bool:
    return is_null_homotopic(m1 - m2)


def homotopy_span_contains(target: MfMorphism, morphisms: Sequence[MfMorphism]) -> bool:
    """Whether ``target`` is a linear combination of ``morphisms`` up to homotopy."""
    hc = hom_computation(target.source, target.target)
    ech = hc.homotopy.copy()
    for m in morphisms:
        ech.add(hc.vector(m))
    return ech.contains(hc.vector(target))


def is_homotopy_iso(m: MfMorphism) -> bool:
    """Solve for ``g`` with ``g m ~ id`` and ``m g ~ id`` simultaneously."""
    E, F = m.source, m.target
    back = hom_computation(F, E)
    ee = hom_computation(E, E)
    ff = hom_computation(F, F)
    off = ee.coords.size

    def joint(v_e, v_f):
        out = dict(v_e)
        for k, c in v_f.items():
            out[k + off] = c
        return out

    ech = Echelon()
    for v in ee.homotopy_spanning:
        ech.add(joint(v, {}))
    for v in ff.homotopy_spanning:
        ech.add(joint({}, v))
    for v in back.chain_basis:
        g = back.morphism(v)
        ech.add(joint(ee.vector(compose(g, m)), ff.vector(compose(m, g))))
    return ech.contains(joint(ee.vector(identity(E)), ff.vector(identity(F))))


# ---------------------------------------------------------------------------
# shift window


def _weights(F: FreeModule, ring: GradedRing) -> List[Fraction]:
    return [ring.weight(t) for t in F.twists]


def _max_required_weight(E: MatrixFactorization, F: MatrixFactorization, l: int) -> Optional[Fraction]:
    """Largest free weight among the entry degrees of a chain map ``E -> F[l]``."""
    ring = E.ring
    k, odd = divmod(l, 2)
    w1, w0 = _weights(F.F1, ring), _weights(F.F0, ring)
    if odd:
        g1 = [w + k for w in w0]
        g0 = [w + k + 1 for w in w1]
    else:
        g1 = [w + k for w in w1]
        g0 = [w + k for w in w0]
    e1, e0 = _weights(E.F1, ring), _weights(E.F0, ring)
    best = None
    for g, e in ((g1, e1), (g0, e0)):
        if g and e:
            v = max(g) - min(e)
            best = v if best is None else max(best, v)
    return best


def _lower_bound(E: MatrixFactorization, F: MatrixFactorization) -> Optional[int]:
    """Smallest ``l`` at which a chain map ``E -> F[l]`` could have a nonzero entry."""
    if _max_required_weight(E, F, 0) is None and _max_required_weight(E, F, 1) is None:
        return None
    ring = E.ring
    spread = [abs(w) for M in (E.F1, E.F0, F.F1, F.F0) for w in _weights(M, ring)]
    l = -2 * (math.ceil(2 * max(spread, default=0)) + 2)
    while True:
        w = _max_required_weight(E, F, l)
        if w is not None and w >= 0:
            return l
        l += 1


def serre_functor(F: MatrixFactorization) -> MatrixFactorization:
    """``F(-x_1 - ... - x_n)[n]``."""
    ring = F.ring
    total = ring.group.zero
    for d in ring.var_degrees:
        total = total + d
    return shift(twist(F, -total), ring.nvars)


def shift_window(E: MatrixFactorization, F: MatrixFactorization) -> Window:
    """Shifts outside ``[lo, hi]`` carry no morphisms ``E -> F[l]``.

    The lower end is the weight bound: below it every entry component is
    empty.  Chain maps do exist at arbitrarily high shifts (they are all
    null-homotopic there), so the upper end comes from the same weight bound
    applied to ``F -> S(E)`` through Serre duality.  An empty window is
    returned as ``(0, -1)``.
    """
    lo = _lower_bound(E, F)
    dual = _lower_bound(F, serre_functor(E))
    if lo is None or dual is None:
        return (0, -1)
    hi = -dual
    if hi < lo:
        return (0, -1)
    return (lo, hi)
