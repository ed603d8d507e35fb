"""Exact sparse linear algebra over the rationals.

Vectors are ``dict`` objects mapping a column index to a nonzero coefficient.
All elimination is fraction-free: rows are kept as primitive integer vectors
whose leading (smallest) column is the pivot, with a positive pivot entry.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional

Vector = Dict[int, int]


def integral(v: dict) -> Vector:
    """Scale a rational sparse vector to a primitive integer vector.

    The sign is fixed so that the leading coefficient is positive.
    """
    v = {k: c for k, c in v.items() if c != 0}
    if not v:
        return {}
    den = 1
    for c in v.values():
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    out = {k: int(c * den) for k, c in v.items()}
    return _primitive(out)


def _primitive(v: Vector) -> Vector:
    g = 0
    for c in v.values():
        g = gcd(g, c)
        if g == 1:
            break
    lead = v[min(v)]
    if lead < 0:
        g = -g
    if g != 1:
        v = {k: c // g for k, c in v.items()}
    return v


def _combine(a: int, v: Vector, b: int, w: Vector) -> Vector:
    """Return a*v - b*w, dropping zeros."""
    out = {k: a * c for k, c in v.items()} if a != 1 else dict(v)
    for k, c in w.items():
        nc = out.get(k, 0) - b * c
        if nc:
            out[k] = nc
        else:
            out.pop(k, None)
    return out


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace.

    Pivot rule: the pivot of a row is its smallest column index. Rows are
    stored keyed by pivot, so the structure is independent of insertion
    order only up to the span; given the same insertion sequence the stored
    rows are identical.
    """

    def __init__(self, vectors: Iterable[dict] = ()):
        self.rows: Dict[int, Vector] = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce_leading(self, v: Vector) -> Vector:
        while v:
            c = min(v)
            row = self.rows.get(c)
            if row is None:
                return v
            a, b = row[c], v[c]
            g = gcd(a, b)
            v = _combine(a // g, v, b // g, row)
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; return True when it enlarged the span."""
        v = self._reduce_leading(integral(v))
        if not v:
            return False
        v = _primitive(v)
        self.rows[min(v)] = v
        return True

    def contains(self, v: dict) -> bool:
        return not self._reduce_leading(integral(v))

    def reduce(self, v: dict) -> Vector:
        """Fully reduce ``v`` against every pivot; result is primitive."""
        v = integral(v)
        for c in sorted(self.rows):
            b = v.get(c)
            if not b:
                continue
            row = self.rows[c]
            a = row[c]
            g = gcd(a, b)
            v = _combine(a // g, v, b // g, row)
        return _primitive(v) if v else {}

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = dict(self.rows)
        return e


def rank(vectors: Iterable[dict]) -> int:
    return Echelon(vectors).rank


def rref_rows(vectors: Iterable[dict]) -> Dict[int, Vector]:
    """Reduced row echelon form: every pivot column is zero in other rows."""
    ech = Echelon(vectors)
    rows = dict(ech.rows)
    pivots = sorted(rows)
    for p in reversed(pivots):
        prow = rows[p]
        for q in pivots:
            if q >= p:
                break
            row = rows[q]
            b = row.get(p)
            if not b:
                continue
            a = prow[p]
            g = gcd(a, b)
            rows[q] = _primitive(_combine(a // g, row, b // g, prow))
    return rows


def nullspace(vectors: Iterable[dict], ncols: int) -> List[Vector]:
    """Basis of {x : <row, x> = 0 for every row}, one vector per free column.

    Free columns are taken in increasing order, so the basis is deterministic.
    """
    rows = rref_rows(vectors)
    pivots = set(rows)
    basis = []
    for k in range(ncols):
        if k in pivots:
            continue
        x: Dict[int, Fraction] = {k: Fraction(1)}
        for p, row in rows.items():
            c = row.get(k)
            if c:
                x[p] = Fraction(-c, row[p])
        basis.append(integral(x))
    return basis


def in_span(target: dict, vectors: Iterable[dict]) -> bool:
    return Echelon(vectors).contains(target)


def dot(v: dict, w: dict) -> int:
    if len(w) < len(v):
        v, w = w, v
    return sum(c * w.get(k, 0) for k, c in v.items())


def first_dependency(vectors: List[dict]) -> Optional[int]:
    """Index of the first vector lying in the span of its predecessors."""
    ech = Echelon()
    for i, v in enumerate(vectors):
        if not ech.add(v):
            return i
    return None
