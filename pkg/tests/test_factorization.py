import pytest

from chainmf.collection import base_object, base_objects, psi, psi_i
from chainmf.factorization import (
    DegreeMismatch,
    FreeModule,
    MatrixFactorization,
    MfMorphism,
    PolyMatrix,
    PotentialMismatch,
    ShapeMismatch,
    compose,
    cone,
    direct_sum,
    dumps,
    identity,
    loads,
    morphism_errors,
    shift,
    tensor,
    twist,
    unit_object,
    validate,
    zero_morphism,
    zero_object,
)
from chainmf.polynomial import chain_ring, graded_ring


def _psiE0(a=(2,)):
    return psi(base_object(), a)


def _rank1(R, u, v, potential):
    """``S(d_u - f) --u--> S --v--> S(f) ...`` with the twist chosen so that ``u`` is homogeneous."""
    du = R.degree_of(next(iter(u.terms)))
    return MatrixFactorization(R, potential, FreeModule([-du]), FreeModule([R.group.zero]),
                               PolyMatrix(R, 1, 1, [[u]]), PolyMatrix(R, 1, 1, [[v]]))


def test_base_object_shapes():
    E0, P, F = base_objects(2, 2)
    assert E0.rank == (0, 1)
    R = chain_ring((2,))
    assert P.F1.twists == (-R.var_degrees[0],) and P.F0.twists == (R.group.zero,)
    assert P.phi1.rows[0][0] == R.var(1) and P.phi0.rows[0][0] == R.var(1)
    S = chain_ring((2, 2))
    assert F.phi0.rows[0][0] == S.var(1) + S.var(2) ** 2
    for X in (E0, P, F):
        assert validate(X) == []


def test_validate_reports_corruption():
    F = _psiE0()
    R = F.ring
    bad = MatrixFactorization(R, F.potential, F.F1, F.F0, F.phi1,
                              PolyMatrix(R, 1, 1, [[R.var(1) ** 2]]))
    errs = validate(bad)
    assert errs and errs[0].startswith("Homogeneity")
    bad2 = MatrixFactorization(R, F.potential, F.F1, F.F0, F.phi1, PolyMatrix(R, 1, 1, [[R.var(1) * 2]]))
    assert any(e.startswith("SquareMismatch") for e in validate(bad2))
    assert validate(zero_object(R)) == []


def test_shape_mismatch():
    R = chain_ring((2,))
    with pytest.raises(ShapeMismatch):
        MatrixFactorization(R, R.zero, FreeModule([R.group.zero]), FreeModule(),
                            PolyMatrix.zero(R, 1, 1), PolyMatrix.zero(R, 1, 0))


def test_shift_and_twist():
    F = _psiE0()
    assert shift(F, 0) is F
    assert shift(F, 2) == twist(F, F.f_degree)
    assert shift(shift(F, 1), -1) == F
    T = shift(F, 1)
    assert T.F1 == F.F0 and T.F0 == F.F1.twist(F.f_degree)
    assert T.phi1 == -F.phi0 and T.phi0 == -F.phi1
    g = F.ring.var_degrees[0]
    assert twist(F, F.ring.group.zero) == F
    assert twist(twist(F, g), g * 2) == twist(F, g * 3)
    # psi_1 is a twist of psi by -x1 followed by a shift
    a = (3,)
    P = psi(base_object(), a)
    assert psi_i(base_object(), 1, a) == shift(twist(P, -P.ring.var_degrees[0]), 1)


def test_direct_sum():
    E0, P, F = base_objects(2, 2)
    R = F.ring
    from chainmf.collection import psi as psi_
    PP = psi_(P, (2, 2))
    S = direct_sum(PP, F)
    assert validate(S) == [] and S.rank == (3, 3)
    assert direct_sum(F, zero_object(R, F.potential)) == F
    with pytest.raises(PotentialMismatch):
        direct_sum(F, unit_object(R))


def test_tensor_x2_y2():
    R = graded_ring(2, [[1, -1, 0], [-2, 0, 1]])
    x, y = R.var(1), R.var(2)
    E = _rank1(R, x, x, x ** 2)
    F = _rank1(R, y, y, y ** 2)
    assert validate(E) == [] and validate(F) == []
    T = tensor(E, F)
    assert T.rank == (2, 2)
    assert T.potential == x ** 2 + y ** 2
    assert validate(T) == []
    assert tensor(E, unit_object(R)) == E
    Z = tensor(zero_object(R, x ** 2), F)
    assert Z.rank == (0, 0)


def test_tensor_degree_mismatch():
    R = chain_ring((2, 2))
    x1 = R.var(1)
    E = _rank1(R, x1, R.var(1) + R.var(2) ** 2, x1 ** 2 + x1 * R.var(2) ** 2)
    # potential of the wrong degree
    bad = MatrixFactorization(R, R.var(2), FreeModule(), FreeModule(),
                              PolyMatrix.zero(R, 0, 0), PolyMatrix.zero(R, 0, 0))
    with pytest.raises(DegreeMismatch):
        tensor(E, bad)


def test_cone():
    E0, P, F = base_objects(3, 2)
    C = cone(identity(F))
    assert validate(C) == [] and C.rank == (2, 2)
    Z = zero_object(F.ring, F.potential)
    assert cone(zero_morphism(Z, F)) == F


def test_morphisms():
    F = _psiE0((3,))
    i = identity(F)
    assert morphism_errors(i) == []
    assert compose(i, i) == i
    z = zero_morphism(F, F)
    assert z.is_zero() and (i - i).is_zero()
    bad = MfMorphism(F, F, i.alpha1.scale(2), i.alpha0)
    assert morphism_errors(bad)


def test_json_roundtrip():
    for X in base_objects(3, 2):
        assert loads(X.ring, dumps(X)) == X
    F = shift(twist(_psiE0(), chain_ring((2,)).var_degrees[0]), 1)
    assert loads(F.ring, dumps(F)) == F
