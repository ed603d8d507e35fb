from fractions import Fraction

import pytest

from chainmf.collection import (
    CollectionError,
    ExponentTooSmall,
    IndexOutOfRange,
    base_object,
    build_collection,
    canonical_lambda,
    canonical_sigma,
    canonical_theta,
    check_exponents,
    label_text,
    milnor_by_weights,
    milnor_number,
    naturality_holds,
    object_from_label,
    phi,
    phi_j,
    phi_morphism,
    psi,
    psi_i,
    psi_i_morphism,
    psi_morphism,
    serre_twist,
    transpose_weights,
    triangle_check,
    verify_exceptional,
    verify_lemmas,
    verify_semiorthogonal,
    verify_serre,
    verify_strong,
    verify_triangles,
)
from chainmf.factorization import (
    compose,
    identity,
    morphism_errors,
    shift,
    twist,
    validate,
    zero_morphism,
    zero_object,
)
from chainmf.hom import hom_basis, hom_dim, is_null_homotopic


def test_check_exponents():
    assert check_exponents([2, 1]) == (2, 1)
    for bad in ([], [1, 2], [2, 0]):
        with pytest.raises(CollectionError):
            check_exponents(bad)


def test_lengths():
    assert len(build_collection((2, 2))) == 3
    c = build_collection((3,))
    assert [o.name for o in c.objects] == ["psi0 E0", "psi1 E0"]
    assert len(build_collection((2, 2, 2))) == 5


def test_milnor():
    assert milnor_number((2, 2)) == 3 == milnor_by_weights((2, 2))
    assert transpose_weights((2, 2)) == [Fraction(1, 4), Fraction(1, 2)]
    assert milnor_number((2,)) == 1
    assert milnor_number((3, 3)) == 7
    assert milnor_number((2, 1)) == 2
    with pytest.raises(ExponentTooSmall):
        milnor_by_weights((2, 1))
    for a in [(4, 3, 2), (2, 5, 3, 2), (6,)]:
        assert milnor_number(a) == milnor_by_weights(a)


def test_objects_validate():
    for a in [(2, 2), (3, 2), (2, 3, 2)]:
        for o in build_collection(a).objects:
            assert validate(o.object) == []
            assert object_from_label(o.label, a) == o.object


def test_psi_phi_shapes():
    E0 = base_object()
    P = psi(E0, (2,))
    assert psi(P, (2, 2)).rank == (2, 2)
    assert psi_i(E0, 0, (3,)) == psi(E0, (3,))
    with pytest.raises(IndexOutOfRange):
        psi_i(E0, 2, (3,))
    F = phi(E0, (2, 3))
    R = F.ring
    assert phi_j(E0, 0, (2, 3)) == shift(twist(F, R.var_degrees[1] * -2), 2)
    with pytest.raises(IndexOutOfRange):
        phi_j(E0, 2, (2, 3))


def test_functor_on_morphisms():
    a = (3, 2)
    P = psi(base_object(), a[:1])
    assert psi_morphism(identity(P), a) == identity(psi(P, a))
    lam = canonical_lambda(base_object(), 0, a[:1])
    m = psi_morphism(lam, a)
    assert morphism_errors(m) == []
    twice = psi_morphism(compose(lam, identity(lam.source)), a)
    assert twice == compose(psi_morphism(lam, a), psi_morphism(identity(lam.source), a))
    assert phi_morphism(zero_morphism(P, P), (3, 2, 2)).is_zero()
    assert psi_i_morphism(identity(P), 0, a) == identity(psi_i(P, 0, a))


def test_canonical_morphisms():
    lam = canonical_lambda(base_object(), 0, (3,))
    assert hom_dim(lam.source, lam.target) == 1
    assert not is_null_homotopic(lam)
    sig = canonical_sigma(base_object(), 0, (2, 2))
    assert morphism_errors(sig) == [] and not is_null_homotopic(sig)
    th = canonical_theta(base_object(), (2, 2))
    assert morphism_errors(th) == [] and not is_null_homotopic(th)
    with pytest.raises(IndexOutOfRange):
        canonical_lambda(base_object(), 0, (2,))
    with pytest.raises(IndexOutOfRange):
        canonical_sigma(base_object(), 1, (2, 2))


def test_lambda_naturality():
    # alpha the generator of End(E^0)
    a = (4,)
    E0 = base_object()
    alpha = hom_basis(E0, E0).basis[0]
    top = canonical_lambda(E0, 0, a)
    left = psi_i_morphism(alpha, 0, a)
    right = psi_i_morphism(alpha, 1, a)
    assert compose(right, top) == compose(top, left)
    assert naturality_holds(top, top, left, right)


def test_triangle():
    assert triangle_check(base_object(), (2, 2)).passed
    assert not triangle_check(base_object(), (2, 2), corrupt=True).passed
    P = psi(base_object(), (2,))
    assert triangle_check(P, (2, 2, 2)).passed
    assert not triangle_check(P, (2, 2, 2), corrupt=True).passed


def test_serre_twist():
    F = psi(base_object(), (2,))
    R = F.ring
    assert serre_twist(F) == shift(twist(F, -R.var_degrees[0]), 1)
    Z = zero_object(R, F.potential)
    assert serre_twist(Z).rank == (0, 0)


@pytest.mark.parametrize("a", [(2,), (3,), (5,), (2, 2), (2, 3), (3, 2), (2, 2, 2)])
def test_strong_exceptional(a):
    c = build_collection(a)
    assert len(c) == milnor_number(a)
    assert verify_exceptional(c).passed
    assert verify_strong(c).passed
    assert verify_semiorthogonal(c).passed


def test_strongness_counterexample_322():
    # Hom(psi0 phi2 E0, phi1 psi0 E0 [1]) is one-dimensional.  The last lemma
    # identifies it with Hom(phi2 E0, psi1 psi0 E0 [1]), and psi1 psi0 E0 is not
    # a member of the level-2 collection when a_2 = 2, so strongness of the
    # smaller collection does not control it.
    c = build_collection((3, 2, 2))
    r = verify_strong(c)
    assert [(v.source, v.target, v.shift, v.dim) for v in r.violations] == [(4, 7, 1, 1)]
    assert c[4].name == "psi0 phi2 E0" and c[7].name == "phi1 psi0 E0"
    assert verify_exceptional(c).passed and verify_semiorthogonal(c).passed


def test_reports_detect_corruption():
    c = build_collection((2, 2))
    rep = verify_strong(c, table={(0, 0): {0: 1, 1: 1}, (0, 1): {0: 2}, (1, 0): {0: 1}, (1, 1): {0: 1}})
    checks = {v.check for v in rep.violations}
    assert rep.violations and not rep.passed
    assert rep.to_json()["counterexamples"]
    assert checks


def test_serre_and_lemmas():
    c = build_collection((3, 2))
    assert verify_serre(c).passed
    assert all(r.passed for r in verify_lemmas(c))
    assert verify_triangles(build_collection((2, 2, 2))).passed


def test_label_text():
    assert label_text(()) == "E0"
    assert label_text((("psi", 0), ("phi", 1))) == "psi0 phi1 E0"
