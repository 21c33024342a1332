import random

import pytest

from dforms.dlinalg import (
    DMatrix, DSubspace, FSubspace, RightDSpace, SpaceMismatch, intersect,
    quotient_dim, span_D, subspace_sum, vector_from_json,
)
from dforms.scalars import F2T, QQ


def test_space_and_vectors(H):
    V = RightDSpace(H, 2)
    assert V.dim_F == 8
    one, i, j, k = H.basis()
    v = V.vector([one, i])
    assert v.entries[1] == i
    assert (v * i).entries == (i, i * i)
    w = v + v * i
    assert w.entries[0] == one + i
    assert V.zero_vector().is_zero()
    with pytest.raises(SpaceMismatch):
        V.vector([one])


def test_f_basis_ordering(H):
    V = RightDSpace(H, 2)
    fb = V.f_basis()
    assert len(fb) == 8
    one, i, j, k = H.basis()
    # index 4s+t is e_s * d_t
    assert fb[0] == V.vector([one, H.zero])
    assert fb[1] == V.vector([i, H.zero])
    assert fb[6] == V.vector([H.zero, j])
    v = V.vector([one + i, j])
    coords = v.f_coords()
    assert [str(c) for c in coords] == ["1", "1", "0", "0", "0", "0", "1", "0"]
    assert V.from_f_coords(coords) == v


def test_span_trivial(H):
    V = RightDSpace(H, 2)
    one = H.one
    e1 = V.vector([one, H.zero])
    W = span_D([e1])
    assert W.dim == 1
    assert W.basis == [e1]


def test_span_right_multiple(H):
    V = RightDSpace(H, 2)
    one, i, j, k = H.basis()
    e1 = V.vector([one, H.zero])
    W = span_D([e1, V.vector([i, H.zero])])
    assert W.dim == 1
    assert W.basis == [e1]


def test_span_two_dim(H):
    V = RightDSpace(H, 2)
    one = H.one
    W = span_D([V.vector([one, one]), V.vector([one, -one])])
    assert W.dim == 2
    # reduced echelon of a full span is the standard basis
    assert W.basis == [V.vector([one, H.zero]), V.vector([H.zero, one])]


def test_span_canonical_form(H):
    rng = random.Random(41)
    V = RightDSpace(H, 3)
    for _ in range(25):
        v1, v2 = V.sample(rng, 2), V.sample(rng, 2)
        W = span_D([v1, v2])
        c1, c2 = H.sample(rng, 2), H.sample(rng, 2)
        while H.nrd(c1).is_zero():
            c1 = H.sample(rng, 2)
        # same span, messier generators
        W2 = span_D([v2 + v1 * c2, v1 * c1])
        assert W.basis == W2.basis


def test_membership_and_coordinates(H):
    rng = random.Random(43)
    V = RightDSpace(H, 3)
    one = H.one
    W = span_D([V.vector([one, one, H.zero]), V.vector([H.zero, one, one])])
    for _ in range(20):
        c1, c2 = H.sample(rng, 2), H.sample(rng, 2)
        v = W.basis[0] * c1 + W.basis[1] * c2
        coords = W.coordinates(v)
        assert coords is not None
        rebuilt = V.zero_vector()
        for b, c in zip(W.basis, coords):
            rebuilt = rebuilt + b * c
        assert rebuilt == v
    assert not W.contains(V.vector([one, H.zero, H.zero]))


def test_char2_span(C2D):
    V = RightDSpace(C2D, 2)
    one, u, v, w = C2D.basis()
    W = span_D([V.vector([u, one]), V.vector([u, one]) * v])
    assert W.dim == 1
    assert W.contains(V.vector([u * w, w]))


def test_is_d_stable_examples(H):
    V1 = RightDSpace(H, 1)
    one, i, j, k = H.basis()
    # full line (1,0)*H inside H^2
    V2 = RightDSpace(H, 2)
    line = span_D([V2.vector([one, H.zero])]).as_f_subspace()
    assert line.dim == 4
    assert line.is_d_stable()
    # F-span of 1 alone in H^1
    S = FSubspace(V1, [V1.vector([one]).f_coords()])
    w = S.d_stable_witness()
    assert w is not None
    v, d = w
    assert v == V1.vector([one]) and d == i
    # F-span of {i,j,k} in H^1
    S2 = FSubspace(V1, [V1.vector([x]).f_coords() for x in (i, j, k)])
    w2 = S2.d_stable_witness()
    assert w2 is not None
    assert w2[0] == V1.vector([i]) and w2[1] == i


def test_f_subspace_lift(H):
    V = RightDSpace(H, 2)
    one = H.one
    W = span_D([V.vector([one, one])])
    S = W.as_f_subspace()
    assert S.dim == 4
    assert S.to_d_subspace() == W


def test_intersect_sum_examples(H):
    V = RightDSpace(H, 2)
    one = H.one
    e1 = span_D([V.vector([one, H.zero])])
    e2 = span_D([V.vector([H.zero, one])])
    assert intersect(e1, e2).dim == 0
    assert subspace_sum(e1, e2).dim == 2
    W = span_D([V.vector([one, one])])
    assert intersect(W, W) == W
    assert subspace_sum(W, DSubspace(V, [])) == W
    assert quotient_dim(subspace_sum(e1, e2), e2) == 1


def test_dim_formula_random(H, C2D):
    for D in (H, C2D):
        rng = random.Random(47)
        V = RightDSpace(D, 3)
        for _ in range(100):
            gens1 = [V.sample(rng, 1) for _ in range(rng.randint(0, 2))]
            gens2 = [V.sample(rng, 1) for _ in range(rng.randint(0, 2))]
            A = span_D(gens1, V) if gens1 else DSubspace(V, [])
            B = span_D(gens2, V) if gens2 else DSubspace(V, [])
            s = subspace_sum(A, B)
            i = intersect(A, B)
            assert A.dim + B.dim == s.dim + i.dim
            assert s.dim_F == 4 * s.dim


def test_d_subspace_always_stable(H, C2D):
    for D in (H, C2D):
        rng = random.Random(53)
        V = RightDSpace(D, 2)
        for _ in range(30):
            W = span_D([V.sample(rng, 2)])
            assert W.as_f_subspace().is_d_stable()


def test_vector_json_roundtrip(H):
    V = RightDSpace(H, 2)
    one, i, j, k = H.basis()
    v = V.vector([one + i * QQ.scalar("1/2"), k])
    assert vector_from_json(V, v.to_json()) == v


def test_dmatrix(H):
    V = RightDSpace(H, 2)
    one, i, j, k = H.basis()
    M = DMatrix(H, [[one, i], [H.zero, j]])
    v = V.vector([one, one])
    assert M.apply(v).entries == (one + i, j)
    # right-linearity
    rng = random.Random(59)
    for _ in range(20):
        x = V.sample(rng, 2)
        d = H.sample(rng, 2)
        assert M.apply(x * d) == M.apply(x) * d
    Minv = M.inverse()
    assert Minv is not None
    assert M * Minv == DMatrix.identity(H, 2)
    assert Minv * M == DMatrix.identity(H, 2)
    sing = DMatrix(H, [[one, i], [j, j * i]])  # second row = j * first
    assert sing.inverse() is None


def test_dmatrix_transpose_apply(H):
    one, i, j, k = H.basis()
    M = DMatrix(H, [[i, j], [k, one]])
    Mt = M.transpose_apply(H.gamma)
    assert Mt.rows[0][0] == -i
    assert Mt.rows[0][1] == -k
    assert Mt.rows[1][0] == -j
