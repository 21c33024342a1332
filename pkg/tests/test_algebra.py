import random

import pytest

from dforms.algebra import (
    AssumedDivision, CertifiedDivision, DimensionMismatch, InvolutionParameter,
    LambdaMinusOne, NotSymmetric, NotTraceLike, Split, SplitAfterExtension,
    SplitAlgebraInverse, WrongCharacteristic, ZeroInverse, ZeroParameter, conj,
    inv, involution_canonical, involution_int, nrd, pi_create,
    pi_extend, pi_symmetric_decompose, quat_create, sym_spaces,
    trace_multiple_recover, trd,
)
from dforms.scalars import F2T, QQ, extend


# ---------------------------------------------------------------- tables

def test_hamilton_basics(H):
    one, i, j, k = H.basis()
    assert i * i == -H.one
    assert i * j == k
    assert j * i == -k
    assert k * k == -H.one
    assert nrd(one + i) == QQ.scalar(2)
    assert conj(i) == -i
    assert trd(i) == QQ.zero
    assert trd(one) == QQ.scalar(2)


def test_char0_general_table():
    A = quat_create(QQ, 2, 5)
    one, i, j, k = A.basis()
    assert i * i == 2 * one
    assert j * j == 5 * one
    assert i * k == 2 * j
    assert k * i == -2 * j
    assert j * k == -5 * i
    assert k * j == 5 * i
    assert k * k == -10 * one


def test_char2_table(C2D):
    A = C2D
    one, u, v, w = A.basis()
    assert u * u == A.a * one + u
    assert v * v == A.b * one
    assert u * v == w
    assert v * u == v + w
    assert w * u == A.a * v
    assert w * v == A.b * u
    assert w * w == A.a * A.b * one
    assert conj(u) == one + u
    assert trd(u) == F2T.one
    assert trd(v) == F2T.zero
    assert trd(w) == F2T.zero


def test_zero_parameters():
    with pytest.raises(ZeroParameter):
        quat_create(QQ, 0, 1)
    with pytest.raises(ZeroParameter):
        quat_create(F2T, F2T.t, 0)
    # char 2 allows a = 0 (but it splits)
    A = quat_create(F2T, 0, F2T.t)
    assert A.division_status.status == "split"


def test_trd_nrd_against_products(H, C2D):
    for A in (H, C2D):
        rng = random.Random(3)
        for _ in range(60):
            x = A.sample(rng, 3)
            assert x + conj(x) == A.from_scalar(trd(x))
            assert x * conj(x) == A.from_scalar(nrd(x))
            assert conj(x) * x == A.from_scalar(nrd(x))


def test_associativity_random(H, C2D, SPLIT11):
    for A in (H, C2D, SPLIT11):
        rng = random.Random(11)
        for _ in range(500):
            x, y, z = (A.sample(rng, 2) for _ in range(3))
            assert (x * y) * z == x * (y * z)


def test_nrd_trd_multiplicative(H, C2D):
    for A in (H, C2D):
        rng = random.Random(5)
        for _ in range(500):
            x, y = A.sample(rng, 2), A.sample(rng, 2)
            assert nrd(x * y) == nrd(x) * nrd(y)
            assert trd(x * y) == trd(y * x)


def test_inverse(H, SPLIT11):
    one, i, j, k = H.basis()
    x = one + i + j
    assert x * inv(x) == H.one
    assert inv(x) * x == H.one
    with pytest.raises(ZeroInverse):
        inv(H.zero)
    w = SPLIT11.division_status.witness
    with pytest.raises(SplitAlgebraInverse):
        inv(w)


def test_mixed_algebra_rejected(H, D25):
    with pytest.raises(DimensionMismatch):
        H.one + D25.one


# ---------------------------------------------------------------- division

def test_division_certificates(H, D25, SPLIT11, C2D, C2TT):
    assert isinstance(H.division_status, CertifiedDivision)
    assert H.division_status.reason == "definite"
    assert isinstance(D25.division_status, CertifiedDivision)
    assert D25.division_status.reason == "hilbert"
    assert isinstance(SPLIT11.division_status, Split)
    w = SPLIT11.division_status.witness
    assert not w.is_zero() and nrd(w).is_zero()
    assert isinstance(C2D.division_status, CertifiedDivision)
    assert C2D.division_status.reason == "valuation"
    # [t,t) has the zero divisor 1+u+v: certification must detect the split
    assert isinstance(C2TT.division_status, Split)
    wt = C2TT.division_status.witness
    assert not wt.is_zero() and nrd(wt).is_zero()


def test_split_one_minus_one():
    A = quat_create(QQ, 1, -1)
    assert isinstance(A.division_status, Split)
    one, i, j, k = A.basis()
    assert nrd(one + i) == QQ.zero  # the textbook witness


def test_split_minus_one_two():
    A = quat_create(QQ, -1, 2)
    st = A.division_status
    assert isinstance(st, Split)
    assert nrd(st.witness).is_zero()


def test_char2_root_split():
    # a = t^2+t makes X^2+X+a reducible (root t), so u+t is a zero divisor
    t = F2T.t
    A = quat_create(F2T, t * t + t, t)
    st = A.division_status
    assert isinstance(st, Split)
    assert nrd(st.witness).is_zero()


def test_char2_square_b_split():
    t = F2T.t
    A = quat_create(F2T, 1, t * t)
    st = A.division_status
    assert isinstance(st, Split)
    assert nrd(st.witness).is_zero()


def test_char2_deg2_valuation_certificate():
    t = F2T.t
    b = t * t * (t * t + t + 1)  # odd place of degree 2
    A = quat_create(F2T, t, b)
    assert isinstance(A.division_status, CertifiedDivision)
    assert A.division_status.reason == "valuation"


def test_real_embedding_certificate():
    K = extend(QQ, [-2, 0, 0, 1])  # x^3 - 2 has a real root
    A = quat_create(K, -1, -1)
    assert isinstance(A.division_status, CertifiedDivision)
    assert A.division_status.reason == "real-embedding"


def test_assumed_division_over_extension():
    # (theta, -1) over Q(sqrt2) is anisotropic (conjugate embedding has
    # theta < 0) but the artifact cannot certify it: must come out assumed
    K = extend(QQ, [-2, 0, 1])
    A = quat_create(K, K.generator, -1, budget=4)
    assert isinstance(A.division_status, AssumedDivision)


def test_split_over_extension():
    # (-1,-1) splits over Q(i)
    K = extend(QQ, [1, 0, 1])
    A = quat_create(K, -1, -1)
    st = A.division_status
    assert isinstance(st, Split)
    assert nrd(st.witness).is_zero() and not st.witness.is_zero()


# ---------------------------------------------------------------- involutions

def test_canonical_involution_props(H, C2D):
    for A in (H, C2D):
        sig = involution_canonical(A)
        rng = random.Random(17)
        for _ in range(500):
            x, y = A.sample(rng, 2), A.sample(rng, 2)
            assert sig(sig(x)) == x
            assert sig(x * y) == sig(y) * sig(x)
        assert sig(A.one) == A.one


def test_twisted_involution(H):
    one, i, j, k = H.basis()
    sig = involution_int(H, i)
    assert sig(i) == -i
    assert sig(j) == j
    assert sig(k) == k
    assert sig(one) == one
    rng = random.Random(23)
    for _ in range(200):
        x, y = H.sample(rng, 2), H.sample(rng, 2)
        assert sig(sig(x)) == x
        assert sig(x * y) == sig(y) * sig(x)


def test_twisted_involution_guards(H, C2D):
    one, i, j, k = H.basis()
    with pytest.raises(InvolutionParameter):
        involution_int(H, one + i)  # gamma(s) != -s
    with pytest.raises(InvolutionParameter):
        involution_int(H, H.zero)
    with pytest.raises(WrongCharacteristic):
        involution_int(C2D, C2D.basis()[2])


# ---------------------------------------------------------------- sym spaces

def span_coords(vectors):
    return sorted(tuple(str(c) for c in v.coords) for v in vectors)


def test_sym_spaces_hamilton(H):
    sig = involution_canonical(H)
    sm = sym_spaces(H, sig, -1)
    assert span_coords(sm.sym_basis) == span_coords([H.basis()[1], H.basis()[2], H.basis()[3]])
    assert len(sm.symd_basis) == 3
    sp = sym_spaces(H, sig, 1)
    assert len(sp.sym_basis) == 1 and sp.sym_basis[0] == H.one
    assert len(sp.symd_basis) == 1


def test_sym_spaces_char2(C2D):
    sig = involution_canonical(C2D)
    sp = sym_spaces(C2D, sig, 1)
    one, u, v, w = C2D.basis()
    assert len(sp.sym_basis) == 3
    for x in (one, v, w):
        assert sp.contains(x)
    assert not sp.contains(u)
    # Symd is strictly smaller: just F*1
    assert len(sp.symd_basis) == 1
    assert sp.symd_basis[0] == one
    assert sp.symd_contains(one) and not sp.symd_contains(v)


def test_symd_membership_property(H, C2D):
    for A, lam in ((H, 1), (H, -1), (C2D, 1)):
        sig = involution_canonical(A)
        sp = sym_spaces(A, sig, lam)
        rng = random.Random(29)
        symd_mat = [list(q.coords) for q in sp.symd_basis]
        from dforms import flin
        for _ in range(200):
            x = A.sample(rng, 3)
            y = x + lam * sig(x)
            assert flin.in_span(A.F, symd_mat, list(y.coords)) is not None


def test_sigma_d_s_d_in_symd(H, C2D):
    for A, lam in ((H, -1), (H, 1), (C2D, 1)):
        sig = involution_canonical(A)
        sp = sym_spaces(A, sig, lam)
        rng = random.Random(31)
        for _ in range(500):
            d = A.sample(rng, 2)
            # s random in Symd
            coeffs = [A.F.sample(rng, 2) for _ in sp.symd_basis]
            s = A.zero
            for c, qb in zip(coeffs, sp.symd_basis):
                s = s + c * qb
            assert sp.symd_contains(sig(d) * s * d)


# ---------------------------------------------------------------- pi

def test_pi_flags_hamilton(H):
    sig = involution_canonical(H)
    sm = sym_spaces(H, sig, -1)
    # i-coordinate on span{i,j,k}
    icoord = [QQ.one if q == H.basis()[1] else QQ.zero for q in sm.sym_basis]
    pi = pi_create(sm, icoord)
    assert pi.nontrivial_on_symd
    assert pi(H.basis()[1]) == QQ.one
    assert pi(H.basis()[2]) == QQ.zero
    sp = sym_spaces(H, sig, 1)
    pi1 = pi_create(sp, [1])
    assert pi1.nontrivial_on_symd and pi1.symmetric


def test_pi_char2_trivial_on_symd(C2D):
    sig = involution_canonical(C2D)
    sp = sym_spaces(C2D, sig, 1)
    one, u, v, w = C2D.basis()
    vcoord = [F2T.one if q == v else F2T.zero for q in sp.sym_basis]
    pi = pi_create(sp, vcoord)
    assert not pi.nontrivial_on_symd


def test_pi_domain_guard(H):
    sig = involution_canonical(H)
    sm = sym_spaces(H, sig, -1)
    pi = pi_create(sm, [1, 0, 0])
    with pytest.raises(DimensionMismatch):
        pi(H.one)  # 1 is not in Sym_{-1}
    with pytest.raises(DimensionMismatch):
        pi_create(sm, [1, 0])


def test_trace_multiple_recover(H):
    # l = Trd: values (2, 0, 0, 0)
    assert trace_multiple_recover(H, [2, 0, 0, 0]) == QQ.one
    assert trace_multiple_recover(H, [6, 0, 0, 0]) == QQ.scalar(3)
    res = trace_multiple_recover(H, [0, 0, 1, 0])  # j-coordinate
    assert isinstance(res, NotTraceLike)
    x, y = res.witness
    assert x == H.basis()[1] and y == H.basis()[3]


def test_trace_multiple_recover_char2(C2D):
    # Trd has values (0,1,0,0) on (1,u,v,w)
    assert trace_multiple_recover(C2D, [0, 1, 0, 0]) == F2T.one
    t = F2T.t
    assert trace_multiple_recover(C2D, [0, t, 0, 0]) == t
    res = trace_multiple_recover(C2D, [1, 0, 0, 0])
    assert isinstance(res, NotTraceLike)


def test_pi_symmetric_decompose(H):
    sig = involution_canonical(H)
    sp = sym_spaces(H, sig, 1)
    pi = pi_create(sp, [1])  # pi(c*1) = c
    assert pi_symmetric_decompose(pi) == QQ.scalar("1/2")
    pi2 = pi_create(sp, [-4])  # -2 * Trd restricted to F*1
    assert pi_symmetric_decompose(pi2) == QQ.scalar(-2)


def test_pi_symmetric_decompose_not_symmetric(H):
    one, i, j, k = H.basis()
    sig = involution_int(H, i)
    sp = sym_spaces(H, sig, 1)
    assert len(sp.sym_basis) == 3  # span{1, j, k}
    jcoord = [QQ.one if q == j else QQ.zero for q in sp.sym_basis]
    pi = pi_create(sp, jcoord)
    assert not pi.symmetric
    res = pi_symmetric_decompose(pi)
    assert isinstance(res, NotSymmetric)


def test_pi_symmetric_decompose_guards(H, C2D):
    sigH = involution_canonical(H)
    sm = sym_spaces(H, sigH, -1)
    pi = pi_create(sm, [1, 0, 0])
    with pytest.raises(LambdaMinusOne):
        pi_symmetric_decompose(pi)
    sig2 = involution_canonical(C2D)
    sp2 = sym_spaces(C2D, sig2, 1)
    pi2 = pi_create(sp2, [1, 0, 0])
    with pytest.raises(WrongCharacteristic):
        pi_symmetric_decompose(pi2)


def test_lemma_ker_polarized(H):
    """For pi nontrivial on Symd with S = ker pi, no unit x in Sym has all
    sigma(y)xy' + sigma(y')xy inside S: the polarized basis sweep escapes."""
    sig = involution_canonical(H)
    sm = sym_spaces(H, sig, -1)
    icoord = [QQ.one if q == H.basis()[1] else QQ.zero for q in sm.sym_basis]
    pi = pi_create(sm, icoord)
    basis = H.basis()
    rng = random.Random(37)
    tried = 0
    while tried < 100:
        coeffs = [QQ.sample(rng, 4) for _ in range(3)]
        x = H.zero
        for c, qb in zip(coeffs, sm.sym_basis):
            x = x + c * qb
        if x.is_zero() or nrd(x).is_zero():
            continue
        tried += 1
        escaped = False
        for y in basis:
            img = sig(y) * x * y
            if sm.contains(img) and not pi(img).is_zero():
                escaped = True
                break
        if not escaped:
            for yi in range(4):
                for yj in range(yi + 1, 4):
                    y, yp = basis[yi], basis[yj]
                    img = sig(y) * x * yp + sig(yp) * x * y
                    if sm.contains(img) and not pi(img).is_zero():
                        escaped = True
                        break
                if escaped:
                    break
        assert escaped, f"sigma(y)xy' stayed in ker pi for x = {x}"


def test_lemma_ker_needs_polarization(H):
    # x = j with pi = i-coordinate: every single basis y keeps sigma(y)xy
    # in ker pi, but the pair (1,k) escapes; this pins why the sweep above
    # includes polarized terms.
    sig = involution_canonical(H)
    sm = sym_spaces(H, sig, -1)
    icoord = [QQ.one if q == H.basis()[1] else QQ.zero for q in sm.sym_basis]
    pi = pi_create(sm, icoord)
    one, i, j, k = H.basis()
    for y in (one, i, j, k):
        img = sig(y) * j * y
        assert pi(img).is_zero()
    pol = sig(one) * j * k + sig(k) * j * one
    assert not pi(pol).is_zero()


# ---------------------------------------------------------------- pi_extend

def test_pi_extend(H):
    sig = involution_canonical(H)
    sm = sym_spaces(H, sig, -1)
    icoord = [QQ.one if q == H.basis()[1] else QQ.zero for q in sm.sym_basis]
    pi = pi_create(sm, icoord)
    K = extend(QQ, [-2, 0, 0, 1])
    piK = pi_extend(pi, K)
    AK = piK.spaces.A
    theta = K.generator
    i_theta = AK.element([K.zero, theta, K.zero, K.zero])
    assert piK(i_theta) == theta
    assert piK.nontrivial_on_symd


def test_pi_extend_symmetric_stays_symmetric(H):
    sig = involution_canonical(H)
    sp = sym_spaces(H, sig, 1)
    pi = pi_create(sp, [1])
    K = extend(QQ, [-2, 0, 1])
    piK = pi_extend(pi, K)
    assert piK.symmetric


def test_pi_extend_split_guard(H):
    sig = involution_canonical(H)
    sm = sym_spaces(H, sig, -1)
    pi = pi_create(sm, [1, 0, 0])
    K = extend(QQ, [1, 0, 1])  # Q(i) splits (-1,-1)
    with pytest.raises(SplitAfterExtension):
        pi_extend(pi, K)
