import random
from fractions import Fraction

import pytest

from chainmf.grading import (
    GroupMismatch,
    NonPositiveExponent,
    RankError,
    build_maximal_grading,
    embed,
    free_weight,
    matmul,
    smith_normal_form,
)


def _diag(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def _det(m):
    import sympy
    return int(sympy.Matrix(m).det())


def test_snf_small():
    U, D, V = smith_normal_form([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]
    assert matmul(matmul(U, [[2, 0], [0, 3]]), V) == D
    assert smith_normal_form([[1]])[1] == [[1]]
    assert smith_normal_form([[0, 0], [0, 0]])[1] == [[0, 0], [0, 0]]


def test_snf_random_roundtrip():
    rng = random.Random(7)
    for _ in range(40):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        U, D, V = smith_normal_form(M)
        assert matmul(matmul(U, M), V) == D
        assert abs(_det(U)) == 1 and abs(_det(V)) == 1
        d = [x for x in _diag(D) if x]
        assert all(x > 0 for x in d)
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
        # off-diagonal zero
        assert all(D[i][j] == 0 for i in range(r) for j in range(c) if i != j)


def test_grading_22():
    g = build_maximal_grading((2, 2))
    assert g.group.rank == 1
    assert g.group.torsion_invariants == ()
    assert [x.free_part[0] for x in g.x] == [2, 1]
    assert g.f.free_part[0] == 4
    assert g.f == g.x[0] * 2


def test_grading_empty_and_single():
    g0 = build_maximal_grading(())
    assert g0.f.free_part == (1,)
    g1 = build_maximal_grading((2,))
    assert g1.x[0].free_part == (1,) and g1.f.free_part == (2,)


def test_grading_with_torsion():
    # 3x1 = f = x1 + 2x2 forces 2(x1 - x2) = 0
    g = build_maximal_grading((3, 2))
    d = g.x[0] - g.x[1]
    assert not d.is_zero()
    assert (d * 2).is_zero()


def test_nonpositive_exponent():
    with pytest.raises(NonPositiveExponent):
        build_maximal_grading((2, 0))


def test_free_weights():
    g = build_maximal_grading((2, 2))
    assert g.free_weight(g.x[0]) == Fraction(1, 2)
    assert g.free_weight(g.x[1]) == Fraction(1, 4)
    assert g.free_weight(g.f) == 1
    assert g.free_weight(g.group.zero) == 0


@pytest.mark.parametrize("a", [(2, 1, 3), (5, 5, 5, 5, 5, 5), (2, 3, 4, 5, 1, 2), (4, 1, 1, 1)])
def test_rank_one_positive(a):
    g = build_maximal_grading(a)
    assert g.group.rank == 1
    assert all(0 < g.free_weight(x) < 1 for x in g.x)


def test_embed():
    g1 = build_maximal_grading((2,))
    g2 = build_maximal_grading((2, 2))
    assert embed(g1.f, g1, g2) == g2.f
    assert g2.f.free_part == (4,) and g1.f.free_part == (2,)
    assert embed(g1.x[0], g1, g2) == g2.x[0]
    assert embed(g1.group.zero, g1, g2).is_zero()
    with pytest.raises(GroupMismatch):
        embed(g1.f, g1, build_maximal_grading((3, 2)))


def test_embed_homomorphism_random():
    rng = random.Random(3)
    src = build_maximal_grading((3, 2))
    tgt = build_maximal_grading((3, 2, 2))
    gens = list(src.x) + [src.f]
    for _ in range(30):
        c1 = [rng.randint(-4, 4) for _ in gens]
        c2 = [rng.randint(-4, 4) for _ in gens]
        e1 = sum((g * k for g, k in zip(gens, c1)), src.group.zero)
        e2 = sum((g * k for g, k in zip(gens, c2)), src.group.zero)
        assert embed(e1 + e2, src, tgt) == embed(e1, src, tgt) + embed(e2, src, tgt)
        if not e1.is_zero():
            assert not embed(e1, src, tgt).is_zero()


def test_free_weight_rank_error():
    from chainmf.grading import GradedGroup, GroupPresentation
    G = GradedGroup(GroupPresentation(2, (), ("a", "b")))
    with pytest.raises(RankError):
        free_weight(G.generator(0), G.generator(1))
