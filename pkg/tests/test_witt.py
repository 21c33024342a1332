import random

import pytest

from dforms.algebra import involution_canonical
from dforms.dform import QuadraticDSpace, orth_sum, perp, radical, restrict_basis, scale
from dforms.dlinalg import RightDSpace, span_D
from dforms.hermitian import canonical_pi, herm_create, pi_invariant
from dforms.scalars import QQ, F2T
from dforms.witt import (
    NotDIsotropic, Singular, WittError,
    cancellation_check, d_isometry_test, d_isotropic_search,
    is_d_isotropic_vector, is_d_metabolic, split_metabolic_plane,
    witt_decompose,
)


def herm_diag_q(A, lam, entries):
    """pi-invariant of the diagonal hermitian form <entries> over (A, canonical)."""
    g = involution_canonical(A)
    pi = canonical_pi(A, g, lam)
    n = len(entries)
    gram = [[A.zero] * n for _ in range(n)]
    for i, e in enumerate(entries):
        gram[i][i] = e if not isinstance(e, int) else A.from_scalar(A.F.scalar(e))
    h = herm_create(A, g, lam, gram)
    return pi_invariant(h, pi)


def q0(H):
    return herm_diag_q(H, -1, [H.basis()[1]])  # <i>, skew


# ------------------------------------------------------------- isotropy

def test_q0_anisotropic_via_reduction(H):
    out = d_isotropic_search(q0(H))
    assert out.status == "anisotropic"
    assert out.certificate == "HermitianReduction"


def test_definite_certificate(H):
    # <1,1> over (H, gamma, +1): the 8-dim polar is positive definite
    q = herm_diag_q(H, 1, [1, 1])
    q2 = QuadraticDSpace(q.space, q.gram_upper)  # strip provenance
    out = d_isotropic_search(q2)
    assert out.status == "anisotropic"
    assert out.certificate == "Definite"


def test_isotropy_witness_one_two(H):
    # <1,-2>: q(v) = Nrd(v0) - 2 Nrd(v1), killed by (1+i, 1)
    q = herm_diag_q(H, 1, [1, -2])
    out = d_isotropic_search(q)
    assert out.status == "found"
    assert is_d_isotropic_vector(q, out.v)
    i = H.basis()[1]
    v = q.space.vector([H.one + i, H.one])
    assert is_d_isotropic_vector(q, v)


def test_isotropic_vector_rejects_nonwitness(H):
    q = herm_diag_q(H, 1, [1, -2])
    assert not is_d_isotropic_vector(q, q.space.basis_vector(0))
    assert not is_d_isotropic_vector(q, q.space.zero_vector())


def test_empty_form(H):
    q = QuadraticDSpace(RightDSpace(H, 0), [])
    out = d_isotropic_search(q)
    assert out.status == "anisotropic"
    assert out.certificate == "empty"


def test_char2_totally_singular_decision(C2D):
    F = C2D.F
    t = F.polynomial(0b10)
    V = RightDSpace(C2D, 2)
    # duplicated diagonal blocks: e0 + e1 kills its whole line in char 2
    cs = [F.one, t, t * t, t * t * t] * 2
    g = [[F.zero] * 8 for _ in range(8)]
    for i, c in enumerate(cs):
        g[i][i] = c
    q = QuadraticDSpace(V, g)
    out = d_isotropic_search(q)
    assert out.status == "found"
    assert is_d_isotropic_vector(q, out.v)


def test_char2_totally_singular_anisotropic(C2D):
    F = C2D.F
    t = F.polynomial(0b10)
    V = RightDSpace(C2D, 1)
    g = [[F.zero] * 4 for _ in range(4)]
    for i, c in enumerate([F.one, t, t * t * t, F.one + t]):
        g[i][i] = c
    q = QuadraticDSpace(V, g)
    out = d_isotropic_search(q)
    assert out.status == "anisotropic"
    assert out.certificate == "ExhaustiveSmallField"


# ------------------------------------------------------------- splitting

def test_split_plane_shape(H):
    q = orth_sum(q0(H), scale(-1, q0(H)))
    v = q.space.vector([H.one, H.one])
    assert is_d_isotropic_vector(q, v)
    plane, rest, cols = split_metabolic_plane(q, v)
    assert plane.sub.dim == 2
    assert rest.space.n == 0
    assert radical(plane.form).dim == 0
    assert cols[0] == v


def test_split_rejects_nonisotropic(H):
    q = herm_diag_q(H, 1, [1, 1])
    with pytest.raises(NotDIsotropic):
        split_metabolic_plane(q, q.space.basis_vector(0))


def test_split_rejects_singular(H):
    F = H.F
    g = [[F.zero] * 8 for _ in range(8)]
    for t in range(4):
        g[t][t] = F.one  # second block all-zero: radical
    q = QuadraticDSpace(RightDSpace(H, 2), g)
    with pytest.raises(Singular):
        split_metabolic_plane(q, q.space.basis_vector(1))


# ------------------------------------------------------------- decompose

def test_decompose_q0_zero_planes(H):
    rep = witt_decompose(q0(H))
    assert len(rep.planes) == 0
    assert rep.anisotropic_kernel.space.n == 1
    assert rep.kernel_status.status == "anisotropic"


def test_decompose_one_two(H):
    rep = witt_decompose(herm_diag_q(H, 1, [1, -2]))
    assert len(rep.planes) == 1
    assert rep.anisotropic_kernel.space.n == 0
    assert rep.kernel_status.certificate == "empty"


def test_decompose_one_two_one(H):
    q = herm_diag_q(H, 1, [1, -2, 1])
    rep = witt_decompose(q)
    assert len(rep.planes) == 1
    assert rep.anisotropic_kernel.space.n == 1
    assert rep.kernel_status.status == "anisotropic"
    # plane vectors live in the original space and are genuine witnesses
    for p in rep.planes:
        assert is_d_isotropic_vector(q, p.v)
        assert not q.polar(p.v, p.w).is_zero()


def test_decompose_counts_stable_across_budgets(H):
    q = herm_diag_q(H, 1, [1, -2, 1, 3])
    r1 = witt_decompose(q, budget=400)
    r2 = witt_decompose(q, budget=800)
    assert r1.kernel_status.status == "anisotropic"
    assert len(r1.planes) == len(r2.planes)
    assert r1.anisotropic_kernel.space.n == r2.anisotropic_kernel.space.n


def test_decompose_rejects_singular(H):
    F = H.F
    g = [[F.zero] * 8 for _ in range(8)]
    for t in range(4):
        g[t][t] = F.one
    with pytest.raises(Singular):
        witt_decompose(QuadraticDSpace(RightDSpace(H, 2), g))


def test_report_json_shape(H):
    rep = witt_decompose(herm_diag_q(H, 1, [1, -2]))
    blob = rep.to_json()
    assert set(blob) == {"planes", "kernel", "kernel_status", "basis_change"}
    assert len(blob["planes"]) == 1
    assert set(blob["planes"][0]) == {"v", "w"}


# ------------------------------------------------------------- metabolic

def test_metabolic_plane_pair(H):
    q = orth_sum(q0(H), scale(-1, q0(H)))
    out = is_d_metabolic(q)
    assert out.status == "true"
    L = out.lagrangian
    assert L.dim == 1
    # L equals its own perp
    Pf = perp(q, L)
    Lf = L.as_f_subspace()
    assert Pf.dim == Lf.dim
    for row in Lf.f_basis:
        assert Pf.contains(row)


def test_metabolic_odd_refuses(H):
    out = is_d_metabolic(q0(H))
    assert out.status == "false"
    assert out.detail == "odd-dimension"


def test_metabolic_even_anisotropic(H):
    out = is_d_metabolic(herm_diag_q(H, 1, [1, 1]))
    assert out.status == "false"
    assert "anisotropic-kernel" in out.detail


# ------------------------------------------------------------- isometry

def test_isometry_self(H):
    q = q0(H)
    out = d_isometry_test(q, q)
    assert out.status == "isometric"


def test_isometry_transported(H):
    # restrict q0 along the basis (1+i)*D: an isometric copy with new gram
    q = q0(H)
    c = H.element([1, 1, 0, 0])
    q2 = restrict_basis(q, [q.space.vector([c])])
    out = d_isometry_test(q2, q)
    assert out.status == "isometric"
    assert out.f is not None
    # the returned map is an exact isometry
    fb = q2.space.f_basis()
    for r in range(4):
        assert q.evaluate(out.f.apply(fb[r])) == q2.evaluate(fb[r])


def test_isometry_q0_negated(H):
    # <i> ~ <-i> through c = j, so q0 and -q0 are D-isometric
    out = d_isometry_test(q0(H), scale(-1, q0(H)))
    assert out.status == "isometric"


def test_isometry_signature_refutation(H):
    out = d_isometry_test(herm_diag_q(H, 1, [1, 1]), herm_diag_q(H, 1, [1, -2]))
    assert out.status == "not_isometric"
    assert out.reason == "signature"


def test_isometry_dimension_refutation(H):
    out = d_isometry_test(herm_diag_q(H, 1, [1]), herm_diag_q(H, 1, [1, 1]))
    assert out.status == "not_isometric"
    assert out.reason == "dimension"


def test_isometry_determinant_refutation(H):
    # same signature, determinants in different rational square classes
    F = H.F
    V = RightDSpace(H, 1)

    def diag(cs):
        g = [[F.zero] * 4 for _ in range(4)]
        for i, c in enumerate(cs):
            g[i][i] = F.scalar(c)
        return QuadraticDSpace(V, g)

    out = d_isometry_test(diag([1, 1, 1, 1]), diag([2, 1, 1, 1]))
    assert out.status == "not_isometric"
    assert out.reason == "determinant"


def test_split_i_minus_i_j_rest(H):
    # splitting the diagonal plane off <i,-i,j> leaves a copy of <j>
    i, j = H.basis()[1], H.basis()[2]
    q = herm_diag_q(H, -1, [i, -i, j])
    v = q.space.vector([H.one, H.one, H.zero])
    plane, rest, _cols = split_metabolic_plane(q, v)
    assert rest.space.n == 1
    qj = herm_diag_q(H, -1, [j])
    out = d_isometry_test(rest, qj)
    assert out.status == "isometric"


def test_witt_uniqueness_under_permutation(H):
    # same form presented in two basis orders: equal plane/kernel counts,
    # kernels isometric
    q = herm_diag_q(H, 1, [1, -2, 1])
    db = q.space.d_basis()
    q_perm = restrict_basis(q, [db[2], db[0], db[1]])
    r1 = witt_decompose(q)
    r2 = witt_decompose(q_perm)
    assert len(r1.planes) == len(r2.planes)
    k1, k2 = r1.anisotropic_kernel, r2.anisotropic_kernel
    assert k1.space.n == k2.space.n
    if (r1.kernel_status.status == "anisotropic"
            and r2.kernel_status.status == "anisotropic"):
        out = d_isometry_test(k1, k2, budget=400)
        assert out.status == "isometric"


def test_isometry_algebra_mismatch(H, D25):
    from dforms.dform import AlgebraMismatch
    with pytest.raises(AlgebraMismatch):
        d_isometry_test(q0(H), herm_diag_q(D25, 1, [1]))


# ------------------------------------------------------------- cancellation

def test_cancellation_consistent_pair(H):
    rho = herm_diag_q(H, 1, [1, 1])
    phi = orth_sum(q0(H), scale(-1, q0(H)))
    rep = cancellation_check(rho, phi)
    assert rep.phi_outcome.status == "true"
    assert rep.consistent
    # rho is anisotropic-definite, so rho perp phi cannot be metabolic
    assert rep.rho_outcome.status == "false"


def test_cancellation_requires_metabolic_phi(H):
    with pytest.raises(WittError):
        cancellation_check(q0(H), herm_diag_q(H, 1, [1, 1]))


def test_cancellation_random_sweep(H):
    rng = random.Random(31)
    phi = orth_sum(q0(H), scale(-1, q0(H)))
    vals = [1, -1, 2, -2, 3, -3, 5]
    for _ in range(12):
        entries = [vals[rng.randrange(len(vals))] for _ in range(2)]
        rho = herm_diag_q(H, 1, entries)
        rep = cancellation_check(rho, phi, budget=150)
        assert rep.consistent
