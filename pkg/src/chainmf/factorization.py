"""Graded matrix factorizations, their morphisms and the basic constructions on them.

Conventions.  ``FreeModule(t_1..t_r)`` is ``S(t_1) + ... + S(t_r)`` with
``M(l)_{l'} = M_{l+l'}``.  A matrix from a module with twists ``t`` to one
with twists ``u`` has entry ``(r, c)`` homogeneous of degree ``u_r - t_c``.
A factorization is ``F1 --phi1--> F0 --phi0--> F1(f)``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .grading import GroupElement
from .polynomial import GradedPolynomial, GradedRing


class FactorizationError(ValueError):
    pass


class PotentialMismatch(FactorizationError):
    pass


class DegreeMismatch(FactorizationError):
    pass


class ShapeMismatch(FactorizationError):
    pass


# ---------------------------------------------------------------------------
# free modules and matrices


class FreeModule:
    __slots__ = ("twists",)

    def __init__(self, twists: Sequence[GroupElement] = ()):
        self.twists = tuple(twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def twist(self, l: GroupElement) -> "FreeModule":
        return FreeModule(t + l for t in self.twists)

    def __add__(self, other: "FreeModule") -> "FreeModule":
        return FreeModule(self.twists + other.twists)

    def __eq__(self, other):
        return isinstance(other, FreeModule) and self.twists == other.twists

    def __hash__(self):
        return hash(self.twists)

    def __repr__(self):
        return "FreeModule(" + ", ".join(str(list(t.coords)) for t in self.twists) + ")"


class PolyMatrix:
    """Dense matrix of polynomials with an explicit shape (either side may be 0)."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: GradedRing, nrows: int, ncols: int, rows=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = ring.zero
            rows = [[z] * ncols for _ in range(nrows)]
        self.rows = tuple(tuple(r) for r in rows)
        if len(self.rows) != nrows or any(len(r) != ncols for r in self.rows):
            raise ShapeMismatch("row data does not match declared shape")

    @classmethod
    def zero(cls, ring, nrows, ncols) -> "PolyMatrix":
        return cls(ring, nrows, ncols)

    @classmethod
    def identity(cls, ring, n, scalar=1) -> "PolyMatrix":
        z = ring.zero
        c = scalar if isinstance(scalar, GradedPolynomial) else ring.const(scalar)
        return cls(ring, n, n, [[c if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def blocks(cls, ring, grid: Sequence[Sequence[Optional["PolyMatrix"]]],
               row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "PolyMatrix":
        """Assemble from blocks; ``None`` stands for a zero block."""
        z = ring.zero
        rows = []
        for bi, rs in enumerate(row_sizes):
            for r in range(rs):
                row = []
                for bj, cs in enumerate(col_sizes):
                    b = grid[bi][bj]
                    if b is None:
                        row.extend([z] * cs)
                    else:
                        if b.nrows != rs or b.ncols != cs:
                            raise ShapeMismatch(
                                f"block ({bi},{bj}) is {b.nrows}x{b.ncols}, expected {rs}x{cs}")
                        row.extend(b.rows[r])
                rows.append(row)
        return cls(ring, sum(row_sizes), sum(col_sizes), rows)

    def __getitem__(self, rc):
        r, c = rc
        return self.rows[r][c]

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols}, {[list(r) for r in self.rows]})"

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.rows for p in r)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeMismatch("cannot add matrices of different shapes")
        return PolyMatrix(self.ring, self.nrows, self.ncols,
                          [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.nrows, self.ncols, [[-a for a in r] for r in self.rows])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.nrows, self.ncols, [[a * c for a in r] for r in self.rows])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        z = self.ring.zero
        out = []
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        for r in self.rows:
            row = []
            for col in cols:
                acc = z
                for a, b in zip(r, col):
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, self.nrows, other.ncols, out)

    def kron_identity(self, n: int, left: bool) -> "PolyMatrix":
        """``I_n (x) self`` when ``left`` else ``self (x) I_n``, with index ``p*dim2 + q``."""
        z = self.ring.zero
        R, C = self.nrows, self.ncols
        rows = [[z] * (C * n) for _ in range(R * n)]
        for r in range(R):
            for c in range(C):
                a = self.rows[r][c]
                if not a.terms:
                    continue
                for k in range(n):
                    if left:
                        rows[k * R + r][k * C + c] = a
                    else:
                        rows[r * n + k][c * n + k] = a
        return PolyMatrix(self.ring, R * n, C * n, rows)

    def extend(self, ring: GradedRing) -> "PolyMatrix":
        return PolyMatrix(ring, self.nrows, self.ncols, [[a.extend(ring) for a in r] for r in self.rows])

    def to_json(self) -> list:
        return [[a.to_json() for a in r] for r in self.rows]


def _degree_errors(name: str, m: PolyMatrix, source: FreeModule, target: FreeModule,
                   offset: Optional[GroupElement] = None) -> List[str]:
    errs = []
    if m.nrows != target.rank or m.ncols != source.rank:
        return [f"{name}: shape {m.nrows}x{m.ncols} does not match modules "
                f"{target.rank}x{source.rank}"]
    for r in range(m.nrows):
        for c in range(m.ncols):
            d = target.twists[r] - source.twists[c]
            if offset is not None:
                d = d + offset
            if not m.rows[r][c].is_homogeneous_of(d):
                errs.append(f"Homogeneity: {name}[{r}][{c}] = {m.rows[r][c]} is not of degree {list(d.coords)}")
    return errs


# ---------------------------------------------------------------------------
# factorizations


class MatrixFactorization:
    """``F1 --phi1--> F0 --phi0--> F1(f)`` over ``ring`` with a given potential."""

    __slots__ = ("ring", "potential", "F1", "F0", "phi1", "phi0", "_key")

    def __init__(self, ring: GradedRing, potential: GradedPolynomial,
                 F1: FreeModule, F0: FreeModule, phi1: PolyMatrix, phi0: PolyMatrix):
        self.ring = ring
        self.potential = potential
        self.F1 = F1
        self.F0 = F0
        self.phi1 = phi1
        self.phi0 = phi0
        self._key = None
        if phi1.nrows != F0.rank or phi1.ncols != F1.rank:
            raise ShapeMismatch("phi1 shape does not match F1 -> F0")
        if phi0.nrows != F1.rank or phi0.ncols != F0.rank:
            raise ShapeMismatch("phi0 shape does not match F0 -> F1(f)")

    @property
    def f_degree(self) -> GroupElement:
        return self.ring.f_degree

    @property
    def rank(self) -> Tuple[int, int]:
        return (self.F1.rank, self.F0.rank)

    def key(self):
        """Hashable content key; equal keys mean literally equal factorizations."""
        if self._key is None:
            self._key = (self.ring.nvars, tuple(t.coords for t in self.F1.twists),
                         tuple(t.coords for t in self.F0.twists), self.phi1.rows, self.phi0.rows,
                         self.potential)
        return self._key

    def __eq__(self, other):
        return isinstance(other, MatrixFactorization) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"MatrixFactorization(rank={self.rank}, F1={self.F1!r}, F0={self.F0!r}, "
                f"phi1={[list(r) for r in self.phi1.rows]}, phi0={[list(r) for r in self.phi0.rows]})")

    def to_json(self) -> dict:
        return {
            "potential": self.potential.to_json(),
            "F1": [t.to_json() for t in self.F1.twists],
            "F0": [t.to_json() for t in self.F0.twists],
            "phi1": self.phi1.to_json(),
            "phi0": self.phi0.to_json(),
        }

    @classmethod
    def from_json(cls, ring: GradedRing, data: dict) -> "MatrixFactorization":
        def elem(d):
            return ring.group.element(list(d["free"]) + list(d["torsion"]))

        def mat(rows, nr, nc):
            return PolyMatrix(ring, nr, nc,
                              [[GradedPolynomial.from_json(ring, p) for p in r] for r in rows])

        F1 = FreeModule(elem(d) for d in data["F1"])
        F0 = FreeModule(elem(d) for d in data["F0"])
        return cls(ring, GradedPolynomial.from_json(ring, data["potential"]), F1, F0,
                   mat(data["phi1"], F0.rank, F1.rank), mat(data["phi0"], F1.rank, F0.rank))


def dumps(F: MatrixFactorization) -> str:
    return json.dumps(F.to_json(), sort_keys=True, separators=(",", ":"))


def loads(ring: GradedRing, text: str) -> MatrixFactorization:
    return MatrixFactorization.from_json(ring, json.loads(text))


def validate(F: MatrixFactorization) -> List[str]:
    """Every violated homogeneity or square-to-f condition; empty when valid."""
    errs = _degree_errors("phi1", F.phi1, F.F1, F.F0)
    errs += _degree_errors("phi0", F.phi0, F.F0, F.F1, offset=F.f_degree)
    if errs:
        return errs
    f = F.potential
    for name, prod, n in (("phi0*phi1", F.phi0 @ F.phi1, F.F1.rank),
                          ("phi1*phi0", F.phi1 @ F.phi0, F.F0.rank)):
        for r in range(n):
            for c in range(n):
                want = f if r == c else F.ring.zero
                if prod.rows[r][c] != want:
                    errs.append(f"SquareMismatch: ({name})[{r}][{c}] = {prod.rows[r][c]}, expected {want}")
    return errs


def zero_object(ring: GradedRing, potential: Optional[GradedPolynomial] = None) -> MatrixFactorization:
    pot = ring.zero if potential is None else potential
    return MatrixFactorization(ring, pot, FreeModule(), FreeModule(),
                               PolyMatrix.zero(ring, 0, 0), PolyMatrix.zero(ring, 0, 0))


def unit_object(ring: GradedRing) -> MatrixFactorization:
    """``0 -> S -> 0`` as a factorization of the zero potential."""
    return MatrixFactorization(ring, ring.zero, FreeModule(), FreeModule([ring.group.zero]),
                               PolyMatrix.zero(ring, 1, 0), PolyMatrix.zero(ring, 0, 1))


def twist(F: MatrixFactorization, l: GroupElement) -> MatrixFactorization:
    if l.is_zero():
        return F
    return MatrixFactorization(F.ring, F.potential, F.F1.twist(l), F.F0.twist(l), F.phi1, F.phi0)


def _shift_once(F: MatrixFactorization) -> MatrixFactorization:
    return MatrixFactorization(F.ring, F.potential, F.F0, F.F1.twist(F.f_degree), -F.phi0, -F.phi1)


def _unshift_once(F: MatrixFactorization) -> MatrixFactorization:
    return MatrixFactorization(F.ring, F.potential, F.F0.twist(-F.f_degree), F.F1, -F.phi0, -F.phi1)


def shift(F: MatrixFactorization, k: int) -> MatrixFactorization:
    """``F[k]``; ``[1]`` rotates with a sign and ``[2]`` is the twist by ``f``."""
    q, r = divmod(k, 2)
    out = twist(F, F.f_degree * q) if q else F
    if r:
        out = _shift_once(out)
    return out


def direct_sum(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    if E.potential != F.potential:
        raise PotentialMismatch("direct sum of factorizations of different potentials")
    ring = E.ring
    phi1 = PolyMatrix.blocks(ring, [[E.phi1, None], [None, F.phi1]],
                             [E.F0.rank, F.F0.rank], [E.F1.rank, F.F1.rank])
    phi0 = PolyMatrix.blocks(ring, [[E.phi0, None], [None, F.phi0]],
                             [E.F1.rank, F.F1.rank], [E.F0.rank, F.F0.rank])
    return MatrixFactorization(ring, E.potential, E.F1 + F.F1, E.F0 + F.F0, phi1, phi0)


def _tensor_module(A: FreeModule, B: FreeModule) -> FreeModule:
    return FreeModule(a + b for a in A.twists for b in B.twists)


def tensor(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    """Factorization of ``f + g`` from factorizations of ``f`` and ``g``.

    Components are ``(E1 F0 + E0 F1, E0 F0 + E1 F1(f))`` with index
    ``p * rank(F_j) + q`` inside each ``E_i F_j`` block.
    """
    if E.ring is not F.ring and E.ring.nvars != F.ring.nvars:
        raise DegreeMismatch("factorizations over different rings")
    if E.f_degree != F.f_degree:
        raise DegreeMismatch("potentials have different degrees")
    for P in (E.potential, F.potential):
        if not P.is_homogeneous_of(E.f_degree):
            raise DegreeMismatch(f"potential {P} is not of degree f")
    ring, fdeg = E.ring, E.f_degree
    e1, e0, g1, g0 = E.F1.rank, E.F0.rank, F.F1.rank, F.F0.rank
    A = lambda m, n: m.kron_identity(n, left=False)  # m (x) 1
    B = lambda m, n: m.kron_identity(n, left=True)   # 1 (x) m
    T1 = _tensor_module(E.F1, F.F0) + _tensor_module(E.F0, F.F1)
    T0 = _tensor_module(E.F0, F.F0) + _tensor_module(E.F1, F.F1).twist(fdeg)
    phi1 = PolyMatrix.blocks(ring, [
        [A(E.phi1, g0), B(F.phi1, e0)],
        [-B(F.phi0, e1), A(E.phi0, g1)],
    ], [e0 * g0, e1 * g1], [e1 * g0, e0 * g1])
    phi0 = PolyMatrix.blocks(ring, [
        [A(E.phi0, g0), -B(F.phi1, e1)],
        [B(F.phi0, e0), A(E.phi1, g1)],
    ], [e1 * g0, e0 * g1], [e0 * g0, e1 * g1])
    return MatrixFactorization(ring, E.potential + F.potential, T1, T0, phi1, phi0)


def extend(F: MatrixFactorization, ring: GradedRing, degree_map) -> MatrixFactorization:
    """View ``F`` over a chain ring with more variables (potential unchanged)."""
    return MatrixFactorization(
        ring, F.potential.extend(ring),
        FreeModule(degree_map(t) for t in F.F1.twists),
        FreeModule(degree_map(t) for t in F.F0.twists),
        F.phi1.extend(ring), F.phi0.extend(ring))


# ---------------------------------------------------------------------------
# morphisms


class MfMorphism:
    """A pair ``(alpha1: E1 -> F1, alpha0: E0 -> F0)``."""

    __slots__ = ("source", "target", "alpha1", "alpha0")

    def __init__(self, source: MatrixFactorization, target: MatrixFactorization,
                 alpha1: PolyMatrix, alpha0: PolyMatrix):
        if alpha1.nrows != target.F1.rank or alpha1.ncols != source.F1.rank:
            raise ShapeMismatch("alpha1 shape does not match E1 -> F1")
        if alpha0.nrows != target.F0.rank or alpha0.ncols != source.F0.rank:
            raise ShapeMismatch("alpha0 shape does not match E0 -> F0")
        self.source = source
        self.target = target
        self.alpha1 = alpha1
        self.alpha0 = alpha0

    def __repr__(self):
        return (f"MfMorphism(alpha1={[list(r) for r in self.alpha1.rows]}, "
                f"alpha0={[list(r) for r in self.alpha0.rows]})")

    def __eq__(self, other):
        return (isinstance(other, MfMorphism) and self.source == other.source
                and self.target == other.target and self.alpha1 == other.alpha1
                and self.alpha0 == other.alpha0)

    def __hash__(self):
        return hash((self.alpha1, self.alpha0))

    def __add__(self, other: "MfMorphism") -> "MfMorphism":
        _same_ends(self, other)
        return MfMorphism(self.source, self.target, self.alpha1 + other.alpha1, self.alpha0 + other.alpha0)

    def __neg__(self):
        return MfMorphism(self.source, self.target, -self.alpha1, -self.alpha0)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MfMorphism":
        return MfMorphism(self.source, self.target, self.alpha1.scale(c), self.alpha0.scale(c))

    def is_zero(self) -> bool:
        return self.alpha1.is_zero() and self.alpha0.is_zero()


def _same_ends(a: MfMorphism, b: MfMorphism):
    if a.source != b.source or a.target != b.target:
        raise ShapeMismatch("morphisms have different endpoints")


def morphism_errors(m: MfMorphism) -> List[str]:
    E, F = m.source, m.target
    if E.potential != F.potential:
        return ["PotentialMismatch: source and target have different potentials"]
    errs = _degree_errors("alpha1", m.alpha1, E.F1, F.F1)
    errs += _degree_errors("alpha0", m.alpha0, E.F0, F.F0)
    if errs:
        return errs
    if m.alpha0 @ E.phi1 != F.phi1 @ m.alpha1:
        errs.append("Commutation: alpha0 phi1^E != phi1^F alpha1")
    if m.alpha1 @ E.phi0 != F.phi0 @ m.alpha0:
        errs.append("Commutation: alpha1 phi0^E != phi0^F alpha0")
    return errs


def identity(F: MatrixFactorization) -> MfMorphism:
    return MfMorphism(F, F, PolyMatrix.identity(F.ring, F.F1.rank), PolyMatrix.identity(F.ring, F.F0.rank))


def zero_morphism(E: MatrixFactorization, F: MatrixFactorization) -> MfMorphism:
    return MfMorphism(E, F, PolyMatrix.zero(E.ring, F.F1.rank, E.F1.rank),
                      PolyMatrix.zero(E.ring, F.F0.rank, E.F0.rank))


def compose(g: MfMorphism, f: MfMorphism) -> MfMorphism:
    """``g o f``."""
    if f.target != g.source:
        raise ShapeMismatch("target of f is not the source of g")
    return MfMorphism(f.source, g.target, g.alpha1 @ f.alpha1, g.alpha0 @ f.alpha0)


def twist_morphism(m: MfMorphism, l: GroupElement) -> MfMorphism:
    return MfMorphism(twist(m.source, l), twist(m.target, l), m.alpha1, m.alpha0)


def shift_morphism(m: MfMorphism, k: int) -> MfMorphism:
    """``T^k`` on morphisms; each rotation swaps the two components without signs."""
    a1, a0 = (m.alpha1, m.alpha0) if k % 2 == 0 else (m.alpha0, m.alpha1)
    return MfMorphism(shift(m.source, k), shift(m.target, k), a1, a0)


def cone(m: MfMorphism) -> MatrixFactorization:
    """Mapping cone ``(F1 + E0, F0 + E1(f))``."""
    E, F = m.source, m.target
    ring = F.ring
    phi1 = PolyMatrix.blocks(ring, [[F.phi1, m.alpha0], [None, -E.phi0]],
                             [F.F0.rank, E.F1.rank], [F.F1.rank, E.F0.rank])
    phi0 = PolyMatrix.blocks(ring, [[F.phi0, m.alpha1], [None, -E.phi1]],
                             [F.F1.rank, E.F0.rank], [F.F0.rank, E.F1.rank])
    return MatrixFactorization(ring, F.potential, F.F1 + E.F0, F.F0 + E.F1.twist(F.f_degree), phi1, phi0)


def is_strict_iso(m: MfMorphism) -> bool:
    """Both components invertible as polynomial matrices (checked by constructing inverses)."""
    return strict_inverse(m) is not None


def strict_inverse(m: MfMorphism) -> Optional[MfMorphism]:
    inv1 = _matrix_inverse(m.alpha1)
    inv0 = _matrix_inverse(m.alpha0)
    if inv1 is None or inv0 is None:
        return None
    return MfMorphism(m.target, m.source, inv1, inv0)


def _matrix_inverse(M: PolyMatrix) -> Optional[PolyMatrix]:
    """Inverse of ``C + N`` with ``C`` the constant part, via a Neumann series.

    This succeeds exactly when ``C`` is invertible and ``C^{-1} N`` is
    nilpotent; the result is verified on both sides before it is returned.
    """
    n = M.nrows
    if M.ncols != n:
        return None
    ring = M.ring
    if n == 0:
        return M
    C = [[Fraction(M.rows[r][c].constant_term()) for c in range(n)] for r in range(n)]
    Cinv = _rational_inverse(C)
    if Cinv is None:
        return None
    Cinv_m = PolyMatrix(ring, n, n, [[ring.const(v) for v in row] for row in Cinv])
    const_part = PolyMatrix(ring, n, n, [[ring.const(v) for v in row] for row in C])
    N = M - const_part
    K = Cinv_m @ N  # M = C (1 + K)
    term = PolyMatrix.identity(ring, n)
    total = term
    for _ in range(64):
        term = (term @ K).scale(-1)
        if term.is_zero():
            break
        total = total + term
    else:
        return None
    X = total @ Cinv_m
    ident = PolyMatrix.identity(ring, n)
    if M @ X != ident or X @ M != ident:
        return None
    return X


def _rational_inverse(C: List[List[Fraction]]) -> Optional[List[List[Fraction]]]:
    n = len(C)
    A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(C)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [a - factor * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]
