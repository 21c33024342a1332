"""Lambda-hermitian spaces over a quaternion algebra with involution.

A space is its Gram matrix G over D with G = lambda * sigma(G)^T, paired
with h(u,v) = sigma(u)^T G v.  The quadratic side is reached through
pi_invariant, which builds the 4n-dimensional F-form q(v) = pi(h(v,v))
with full construction provenance, so isotropy, metabolicity, and
isometry can be pushed back and forth between the two levels.

Forms with D = F and lambda = -1 are excluded (alternating bilinear
forms carry no quadratic data of this kind).
"""

from __future__ import annotations

import itertools
import random
from typing import Optional, Sequence

from . import flin, ratqf
from .algebra import (
    Involution, PiFunctional, Quat, QuaternionAlgebra,
    NotTraceLike, NotSymmetric,
    involution_extend, pi_extend, pi_symmetric_decompose, sym_spaces,
)
from .dform import (
    AlgebraMismatch, DFormCertificate, PiProvenance, QuadraticDSpace,
    admits_D, herm_gram_eval, radical,
)
from .dlinalg import (
    DMatrix, DSubspace, DVector, FSubspace, RightDSpace, SpaceMismatch,
    d_dense_candidates, d_element_candidates, d_vector_candidates, span_D,
)
from .scalars import Field, Scalar, UnsupportedBase


class HermitianError(Exception):
    pass


class NotLambdaSymmetric(HermitianError):
    def __init__(self, entry):
        self.entry = entry
        super().__init__(f"gram breaks lambda-symmetry at {entry}")


class ExcludedCase(HermitianError):
    """D = F with lambda = -1: alternating forms, outside this theory."""


class Degenerate(HermitianError):
    pass


class DegeneratePi(HermitianError):
    """pi vanishing on Symd makes every pi-invariant totally singular
    (one-dimensional forms over the same algebra then share a single
    invariant while being non-isometric), so classification refuses."""


class NotAdmitting(HermitianError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"form does not admit D; witness {witness}")


class NotSymmetricPi(HermitianError):
    pass


class AlphaZero(HermitianError):
    pass


class VerificationFailed(HermitianError):
    def __init__(self, detail):
        self.detail = detail
        super().__init__(f"reconstructed form failed verification: {detail}")


class HermitianSpace:
    def __init__(self, sigma: Involution, lam: int, gram: Sequence[Sequence]):
        A = sigma.A
        if lam not in (1, -1):
            raise HermitianError("lambda must be +1 or -1")
        if A.char == 2:
            lam = 1
        self.sigma = sigma
        self.lam = lam
        self.A = A
        rows = [[x if isinstance(x, Quat) else A.from_scalar(A.F.scalar(x))
                 for x in row] for row in gram]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise HermitianError("gram must be square")
        for row in rows:
            for x in row:
                if x.A != A:
                    raise AlgebraMismatch("gram entry from a different algebra")
        self.n = n
        self.gram = rows
        self.space = RightDSpace(A, n)
        lam_s = A.F.scalar(lam)
        for i in range(n):
            for j in range(n):
                if rows[j][i] != sigma(rows[i][j]) * lam_s:
                    raise NotLambdaSymmetric((i, j))
        self._spot_check()

    def eval(self, u: DVector, v: DVector) -> Quat:
        if u.space != self.space or v.space != self.space:
            raise SpaceMismatch("vector from a different space")
        return herm_gram_eval(self.sigma, self.gram, u, v)

    def _spot_check(self):
        rng = random.Random(1789)
        A = self.A
        lam_s = A.F.scalar(self.lam)
        for _ in range(5):
            u = self.space.sample(rng, 1)
            v = self.space.sample(rng, 1)
            a, b = A.sample(rng, 1), A.sample(rng, 1)
            huv = self.eval(u, v)
            assert self.eval(u * a, v * b) == self.sigma(a) * huv * b
            assert self.eval(v, u) == self.sigma(huv) * lam_s

    def to_json(self) -> dict:
        return {
            "hermitian": {
                "algebra": self.A.to_json(),
                "sigma": self.sigma.to_json(),
                "lambda": self.lam,
                "gram": [[[str(c) for c in x.coords] for x in row]
                         for row in self.gram],
            }
        }

    def __repr__(self):
        return f"HermitianSpace(n={self.n}, lambda={self.lam:+d} over {self.A!r})"


def herm_create(D, sigma, lam: int, gram) -> HermitianSpace:
    if isinstance(D, Field):
        if lam == -1:
            raise ExcludedCase("D = F with lambda = -1 is excluded")
        raise UnsupportedBase("forms with D = F are handled as plain F-forms")
    if not isinstance(D, QuaternionAlgebra):
        raise HermitianError(f"unsupported coefficient algebra {D!r}")
    if sigma.A != D:
        raise AlgebraMismatch("involution on a different algebra")
    return HermitianSpace(sigma, lam, gram)


def herm_eval(h: HermitianSpace, u: DVector, v: DVector) -> Quat:
    return h.eval(u, v)


def is_nondegenerate(h: HermitianSpace) -> bool:
    if h.n == 0:
        return True
    return DMatrix(h.A, h.gram).is_invertible()


def herm_scale(alpha, h: HermitianSpace) -> HermitianSpace:
    a = h.A.F.scalar(alpha)
    return HermitianSpace(h.sigma, h.lam,
                          [[x * a for x in row] for row in h.gram])


def orth_sum_h(h1: HermitianSpace, h2: HermitianSpace) -> HermitianSpace:
    if h1.A != h2.A or h1.sigma != h2.sigma or h1.lam != h2.lam:
        raise AlgebraMismatch("summands over different (D, sigma, lambda)")
    A = h1.A
    z = A.zero
    n1, n2 = h1.n, h2.n
    g = [[h1.gram[i][j] if j < n1 else z for j in range(n1 + n2)]
         for i in range(n1)]
    g += [[z if j < n1 else h2.gram[i - n1][j - n1] for j in range(n1 + n2)]
          for i in range(n1, n1 + n2)]
    return HermitianSpace(h1.sigma, h1.lam, g)


def sub_hermitian(h: HermitianSpace, basis: list[DVector]) -> HermitianSpace:
    g = [[h.eval(u, v) for v in basis] for u in basis]
    return HermitianSpace(h.sigma, h.lam, g)


# ------------------------------------------------------------- diagonal

class HermitianDiag:
    def __init__(self, basis: list[DVector], entries: list[Quat]):
        self.basis = basis
        self.entries = entries

    def __repr__(self):
        return f"HermitianDiag({self.entries})"


def _ortho_complement(h: HermitianSpace, inside: list[list[Scalar]],
                      against: list[DVector]) -> list[list[Scalar]]:
    """F-basis of {x in span(inside) : h(v, x) = 0 for v in against}."""
    space = h.space
    F = h.A.F
    rows = []
    for fc in inside:
        x = space.from_f_coords(fc)
        cond = []
        for v in against:
            cond.extend(h.eval(v, x).coords)
        rows.append(cond)
    ker = flin.kernel_basis(F, flin.transpose(rows)) if rows else []
    # kernel coefficients recombine the inside-basis
    out = []
    for co in ker:
        acc = [F.zero] * space.dim_F
        for c, fc in zip(co, inside):
            if not c.is_zero():
                acc = [ai + c * fi for ai, fi in zip(acc, fc)]
        out.append(acc)
    return FSubspace(space, out).f_basis


def _anisotropic_vector(h: HermitianSpace, fbasis: list[list[Scalar]],
                        budget: int) -> Optional[DVector]:
    space = h.space
    vecs = [space.from_f_coords(fc) for fc in fbasis]
    cands = list(vecs)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            cands.append(vecs[i] + vecs[j])
    rng = random.Random(2161)
    while len(cands) < budget:
        v = space.zero_vector()
        for b in vecs:
            v = v + b * h.A.sample(rng, 1)
        cands.append(v)
    for v in cands[:budget]:
        if not v.is_zero() and not h.eval(v, v).is_zero():
            return v
    return None


def herm_diagonalize(h: HermitianSpace, budget: int = 120) -> Optional[HermitianDiag]:
    """Orthogonal D-basis with diagonal values, or None when the greedy
    anisotropic-vector search stalls (possible for char-2 even forms)."""
    space = h.space
    basis: list[DVector] = []
    entries: list[Quat] = []
    current = [list(fc) for fc in
               FSubspace(space, [v.f_coords() for v in space.f_basis()]).f_basis]
    while current:
        v = _anisotropic_vector(h, current, budget)
        if v is None:
            # all of h vanishes on the current block?
            vecs = [space.from_f_coords(fc) for fc in current]
            if all(h.eval(x, y).is_zero() for x in vecs for y in vecs):
                sub = FSubspace(space, current).to_d_subspace()
                for b in sub.basis:
                    basis.append(b)
                    entries.append(h.A.zero)
                return HermitianDiag(basis, entries)
            return None
        basis.append(v)
        entries.append(h.eval(v, v))
        current = _ortho_complement(h, current, [v])
    return HermitianDiag(basis, entries)


# ------------------------------------------------------------- isotropy

class HermIsotropy:
    """status: found / anisotropic / unknown."""

    def __init__(self, status: str, v: Optional[DVector] = None,
                 detail: str = "", samples: int = 0):
        self.status = status
        self.v = v
        self.detail = detail
        self.samples = samples

    def __repr__(self):
        if self.status == "found":
            return f"Found({self.v})"
        if self.status == "anisotropic":
            return f"AnisotropicCertified({self.detail})"
        return f"Unknown(samples={self.samples})"


def coordinate_pis(A: QuaternionAlgebra, sigma: Involution, lam: int) -> list[PiFunctional]:
    spaces = sym_spaces(A, sigma, lam)
    out = []
    for idx in range(len(spaces.sym_basis)):
        coeffs = [1 if t == idx else 0 for t in range(len(spaces.sym_basis))]
        out.append(PiFunctional(spaces, coeffs))
    return out


def canonical_pi(A: QuaternionAlgebra, sigma: Involution, lam: int) -> PiFunctional:
    """First coordinate functional that survives on Symd (deterministic)."""
    for pi in coordinate_pis(A, sigma, lam):
        if pi.nontrivial_on_symd:
            return pi
    raise DegeneratePi("no coordinate functional is nontrivial on Symd")


def anisotropy_certificate(h: HermitianSpace) -> Optional[str]:
    """An exact reason why h(v,v) = 0 forces v = 0, if one applies."""
    A = h.A
    if h.n == 0:
        return None
    if h.n == 1 and A.is_division_like():
        g = h.gram[0][0]
        if not A.nrd(g).is_zero():
            # nrd(sigma(v) g v) = nrd(v)^2 nrd(g) != 0 for v != 0
            return "unit-diagonal"
    if A.F.kind == "Q":
        for pi in coordinate_pis(A, h.sigma, h.lam):
            q = pi_invariant(h, pi)
            kind = ratqf.definiteness(q.polar_matrix())
            if kind in ("positive", "negative"):
                return "definite"
    return None


def isotropy_search(h: HermitianSpace, budget: int = 300) -> HermIsotropy:
    if h.n == 0:
        return HermIsotropy("anisotropic", detail="empty")
    # diagonal zeros are instant witnesses
    for i in range(h.n):
        if h.gram[i][i].is_zero():
            v = h.space.basis_vector(i)
            if not v.is_zero():
                return HermIsotropy("found", v)
    cert = anisotropy_certificate(h)
    if cert is not None:
        return HermIsotropy("anisotropic", detail=cert)
    samples = 0
    for v in itertools.islice(d_vector_candidates(h.space), budget):
        samples += 1
        if h.eval(v, v).is_zero():
            return HermIsotropy("found", v)
    # dense second pass: see d_isotropic_search
    for v in itertools.islice(d_dense_candidates(h.space), budget):
        samples += 1
        if h.eval(v, v).is_zero():
            return HermIsotropy("found", v)
    return HermIsotropy("unknown", samples=samples)


# ------------------------------------------------------------- metabolic

class HermMetabolic:
    """status: true / false / unknown, with lagrangian on true."""

    def __init__(self, status: str, lagrangian: Optional[DSubspace] = None,
                 detail: str = ""):
        self.status = status
        self.lagrangian = lagrangian
        self.detail = detail

    def __repr__(self):
        return f"HermMetabolic({self.status}, {self.detail})"


def is_metabolic(h: HermitianSpace, budget: int = 300,
                 cross_check: bool = True) -> HermMetabolic:
    if not is_nondegenerate(h):
        raise Degenerate("metabolicity is defined for nondegenerate forms")
    out = _metabolic_hermitian_route(h, budget)
    if cross_check and out.status in ("true", "false"):
        _metabolic_cross_check(h, out, budget)
    return out


def _metabolic_hermitian_route(h: HermitianSpace, budget: int) -> HermMetabolic:
    if h.n % 2 == 1:
        return HermMetabolic("false", detail="odd-dimension")
    space = h.space
    iso_lines: list[DVector] = []
    cur = sub_hermitian(h, list(space.d_basis()))
    cur_map = list(space.d_basis())
    while cur.n > 0:
        out = isotropy_search(cur, budget)
        if out.status == "anisotropic":
            return HermMetabolic("false", detail=f"anisotropic-kernel({out.detail})")
        if out.status == "unknown":
            return HermMetabolic("unknown", detail="isotropy search exhausted")
        v = out.v
        v_orig = _combine(cur_map, v)
        iso_lines.append(v_orig)
        # hyperbolic partner: any w with h(v, w) invertible
        w = None
        for cand in cur.space.f_basis():
            val = cur.eval(v, cand)
            if not val.is_zero() and not cur.A.nrd(val).is_zero():
                w = cand * _inv(cur.A, val)
                break
        if w is None:
            return HermMetabolic("unknown", detail="no invertible pairing found")
        inside = [list(fc) for fc in FSubspace(
            cur.space, [x.f_coords() for x in cur.space.f_basis()]).f_basis]
        comp = _ortho_complement(cur, inside, [v, w])
        sub = FSubspace(cur.space, comp).to_d_subspace()
        if sub.dim != cur.n - 2:
            return HermMetabolic("unknown", detail="complement dimension off")
        new_map = [_combine(cur_map, b) for b in sub.basis]
        cur = sub_hermitian(cur, list(sub.basis))
        cur_map = new_map
    L = span_D(iso_lines, space)
    assert L.dim == h.n // 2
    for x in L.basis:
        for y in L.basis:
            for d1 in h.A.basis():
                for d2 in h.A.basis():
                    assert h.eval(x * d1, y * d2).is_zero()
    return HermMetabolic("true", lagrangian=L)


def _metabolic_cross_check(h: HermitianSpace, out: HermMetabolic, budget: int):
    """Corroborate the verdict through the quadratic route; a decisive
    disagreement is a hard error."""
    from . import witt
    try:
        pi = canonical_pi(h.A, h.sigma, h.lam)
    except DegeneratePi:
        return
    q = pi_invariant(h, pi)
    qm = witt.is_d_metabolic(q, budget=budget)
    if qm.status in ("true", "false") and qm.status != out.status:
        raise HermitianError(
            f"metabolic routes disagree: hermitian={out.status} quadratic={qm.status}")
    if out.status == "true" and qm.status == "true":
        # lagrangians transfer both ways
        for x in out.lagrangian.basis:
            for y in out.lagrangian.basis:
                for d1 in h.A.basis():
                    for d2 in h.A.basis():
                        assert q.evaluate(x * d1).is_zero()
                        assert q.polar(x * d1, y * d2).is_zero()


def _combine(vmap: list[DVector], v: DVector) -> DVector:
    out = vmap[0].space.zero_vector()
    for base, c in zip(vmap, v.entries):
        out = out + base * c
    return out


def _inv(A: QuaternionAlgebra, x: Quat) -> Quat:
    from .algebra import inv as _qinv
    return _qinv(x)


# ------------------------------------------------------------- pi bridge

def pi_invariant(h: HermitianSpace, pi: PiFunctional) -> QuadraticDSpace:
    A = h.A
    if pi.spaces.A != A:
        raise AlgebraMismatch("pi on a different algebra")
    if pi.spaces.sigma != h.sigma or pi.spaces.lam != h.lam:
        raise AlgebraMismatch("pi belongs to a different (sigma, lambda)")
    F = A.F
    fb = h.space.f_basis()
    m = len(fb)
    g = [[F.zero] * m for _ in range(m)]
    for r in range(m):
        g[r][r] = pi(h.eval(fb[r], fb[r]))
        for c in range(r + 1, m):
            x = h.eval(fb[r], fb[c])
            y = h.eval(fb[c], fb[r])
            g[r][c] = pi(x + y)
    # degenerate pi kills every polar value h(u,v) + lam*sigma(h(u,v)),
    # so the constructor certifies those invariants totally singular
    cert = (DFormCertificate.certified("pi-invariant")
            if pi.nontrivial_on_symd else None)
    q = QuadraticDSpace(
        h.space, g, certificate=cert,
        provenance=PiProvenance(h.sigma, h.lam, pi, h.gram))
    if pi.nontrivial_on_symd:
        assert (radical(q).dim == 0) == is_nondegenerate(h)
    else:
        assert q.certificate.reason == "totally-singular"
    return q


# ------------------------------------------------------------- isometry

class HermIsometry:
    """status: isometric / not_isometric / unknown."""

    def __init__(self, status: str, f: Optional[DMatrix] = None,
                 reason: str = ""):
        self.status = status
        self.f = f
        self.reason = reason

    def __repr__(self):
        if self.status == "isometric":
            return f"Isometric({self.f!r})"
        if self.status == "not_isometric":
            return f"NotIsometric({self.reason})"
        return "Unknown"


def _verify_herm_isometry(h: HermitianSpace, h2: HermitianSpace,
                          f: DMatrix) -> bool:
    db = h.space.d_basis()
    for r, u in enumerate(db):
        fu = f.apply(u)
        for s, v in enumerate(db):
            if h2.eval(fu, f.apply(v)) != h.gram[r][s]:
                return False
    return True


def _skew_one_dim_test(h: HermitianSpace, h2: HermitianSpace,
                       budget: int) -> Optional[HermIsometry]:
    """Exact 1-dim decision for lambda = -1 over char-0 rationals:
    <s> ~ <s'> iff s' = sigma(c) s c for some c; split into the norm-ratio
    square test and a conic over the centralizer of the conjugated line."""
    A = h.A
    F = A.F
    if not (h.n == 1 and h2.n == 1 and h.lam == -1 and A.char == 0
            and F.kind == "Q" and h.sigma.kind == "canonical"
            and A.is_division_like()):
        return None
    s, s2 = h.gram[0][0], h2.gram[0][0]
    ns, ns2 = A.nrd(s), A.nrd(s2)
    if ns.is_zero() or ns2.is_zero():
        return None
    root = ratqf.rational_sqrt(ns2 / ns)
    if root is None:
        return HermIsometry("not_isometric", reason="norm-ratio-not-square")
    solvable_any = False
    for n_val in (root, -root):
        if n_val.is_zero():
            continue
        x = s2 * (F.one / n_val)
        # c0 with c0 x = s c0
        if x == -s:
            c0 = None
            for cand in _pure_anticommuting(A, s):
                c0 = cand
                break
        else:
            c0 = s + x
        if c0 is None or c0.is_zero():
            continue
        nc0 = A.nrd(c0)
        # need nrd(c0 (p + q x)) = n: nc0 p^2 + nc0 nrd(x) q^2 = n
        nx = A.nrd(x)
        if not ratqf.ternary_isotropic(nc0, nc0 * nx, -n_val):
            continue
        solvable_any = True
        pt = ratqf.conic_point(nc0, nc0 * nx, n_val, budget=max(budget, 64))
        if pt is None:
            continue
        p, qv = pt
        c = c0 * (A.from_scalar(p) + x * qv)
        # sigma(c) s c = s2, so the gram transports along c^{-1}
        f = DMatrix(A, [[c.inv()]])
        if _verify_herm_isometry(h, h2, f):
            return HermIsometry("isometric", f=f)
    if not solvable_any:
        return HermIsometry("not_isometric", reason="conic-unsolvable")
    return HermIsometry("unknown", reason="conic point search exhausted")


def _pure_anticommuting(A: QuaternionAlgebra, s: Quat):
    """Pure quaternions c with s c = -c s, basis elements first."""
    basis = A.basis()
    for t in (1, 2, 3):
        c = basis[t]
        if s * c == -(c * s) and not c.is_zero():
            yield c
    for t1 in (1, 2, 3):
        for t2 in (1, 2, 3):
            if t1 < t2:
                c = basis[t1] + basis[t2]
                if s * c == -(c * s):
                    yield c


def _hamilton_plus_classify(h: HermitianSpace, h2: HermitianSpace,
                            budget: int) -> Optional[HermIsometry]:
    """Over (-1,-1)/Q with lambda = +1: the diagonal is rational and the
    norm form reaches every positive rational, so (dim, #positive)
    classifies; the isometry is assembled from four-square scalings."""
    A = h.A
    F = A.F
    if not (h.lam == 1 and A.char == 0 and F.kind == "Q"
            and h.sigma.kind == "canonical"
            and A.a == F.scalar(-1) and A.b == F.scalar(-1)):
        return None
    d1 = herm_diagonalize(h, budget)
    d2 = herm_diagonalize(h2, budget)
    if d1 is None or d2 is None:
        return None
    c1 = [e.coords[0] for e in d1.entries]
    c2 = [e.coords[0] for e in d2.entries]
    if any(c.is_zero() for c in c1 + c2):
        return None
    pos1 = sum(1 for c in c1 if c.v > 0)
    pos2 = sum(1 for c in c2 if c.v > 0)
    if pos1 != pos2:
        return HermIsometry("not_isometric", reason="signature")

    def normalized_columns(diag, cs):
        cols = []
        signs = []
        for v, c in zip(diag.basis, cs):
            mag = c if c.v > 0 else -c
            z = A.element(list(ratqf.four_squares(F.one / mag)))
            cols.append(v * z)
            signs.append(1 if c.v > 0 else -1)
        order = sorted(range(len(cols)), key=lambda i: -signs[i])
        return [cols[i] for i in order]

    n1 = normalized_columns(d1, c1)
    n2 = normalized_columns(d2, c2)
    M1 = DMatrix(A, [[v.entries[i] for v in n1] for i in range(h.n)])
    M2 = DMatrix(A, [[v.entries[i] for v in n2] for i in range(h.n)])
    M1i = M1.inverse()
    if M1i is None:
        return None
    f = M2 * M1i
    if _verify_herm_isometry(h, h2, f):
        return HermIsometry("isometric", f=f)
    return None


def _peel_isometry(h: HermitianSpace, h2: HermitianSpace,
                   budget: int) -> Optional[DMatrix]:
    """Greedy: represent h's diagonal values inside h2, peeling
    orthogonal complements."""
    d1 = herm_diagonalize(h, budget)
    if d1 is None:
        return None
    cur = sub_hermitian(h2, list(h2.space.d_basis()))
    cur_map = list(h2.space.d_basis())
    matched: list[DVector] = []
    rescale_cap = min(160, budget)
    sweep = max(budget, 2500)
    A = h.A
    exact_one_dim = (h.lam == -1 and A.char == 0 and A.F.kind == "Q"
                     and h.sigma.kind == "canonical" and A.is_division_like())
    for target in d1.entries:
        found = None
        fallback = None
        tried_vals: set = set()
        tnrd = A.nrd(target)
        for v in itertools.islice(d_vector_candidates(cur.space), sweep):
            val = cur.eval(v, v)
            if val == target:
                found = v
                break
            # candidates are projective; the target usually lives elsewhere
            # on the line vD, so decide <val> ~ <target> exactly and rescale
            if val.is_zero() or val in tried_vals or fallback is not None:
                continue
            tried_vals.add(val)
            if exact_one_dim and not tnrd.is_zero():
                # norm-ratio square is necessary; cheap exact prefilter
                if ratqf.rational_sqrt(A.nrd(val) / tnrd) is None:
                    continue
                one = _skew_one_dim_test(
                    HermitianSpace(h.sigma, h.lam, [[target]]),
                    HermitianSpace(h.sigma, h.lam, [[val]]), rescale_cap)
                if one is not None and one.status == "isometric":
                    # entry e of the 1-dim witness has sigma(e) val e = target
                    fallback = v * one.f.rows[0][0]
                continue
            if len(tried_vals) > 24:
                continue
            for d in itertools.islice(d_element_candidates(A), rescale_cap):
                if h.sigma(d) * val * d == target:
                    fallback = v * d
                    break
        if found is None:
            found = fallback
        if found is None:
            return None
        matched.append(_combine(cur_map, found))
        inside = [list(fc) for fc in FSubspace(
            cur.space, [x.f_coords() for x in cur.space.f_basis()]).f_basis]
        comp = _ortho_complement(cur, inside, [found])
        try:
            sub = FSubspace(cur.space, comp).to_d_subspace()
        except SpaceMismatch:
            return None
        if sub.dim != cur.n - 1:
            return None
        cur_map = [_combine(cur_map, b) for b in sub.basis]
        cur = sub_hermitian(cur, list(sub.basis))
    # f maps d1.basis -> matched
    A = h.A
    M1 = DMatrix(A, [[v.entries[i] for v in d1.basis] for i in range(h.n)])
    M2 = DMatrix(A, [[v.entries[i] for v in matched] for i in range(h.n)])
    M1i = M1.inverse()
    if M1i is None:
        return None
    return M2 * M1i


def isometry_test(h: HermitianSpace, h2: HermitianSpace, pi: PiFunctional,
                  budget: int = 300) -> HermIsometry:
    if h.A != h2.A or h.sigma != h2.sigma or h.lam != h2.lam:
        raise AlgebraMismatch("forms over different (D, sigma, lambda)")
    if not pi.nontrivial_on_symd:
        raise DegeneratePi(
            "pi vanishes on Symd: <alpha> and <alpha + beta> with beta in "
            "Symd share every pi-invariant yet are not isometric")
    if h.n != h2.n:
        return HermIsometry("not_isometric", reason="dimension")
    A = h.A
    F = A.F
    # char-2 translation family: <alpha> vs <alpha + beta>, beta in Symd.
    # sigma(d) alpha d = alpha + beta would put sigma(d+1) alpha (d+1) in
    # Symd, and conjugating back by (d+1)^{-1} drags alpha itself into
    # Symd; the last step inverts d+1, so this needs a division algebra.
    if A.char == 2 and h.n == 1 and A.is_division_like():
        al, al2 = h.gram[0][0], h2.gram[0][0]
        spaces = pi.spaces
        if (al != al2 and not spaces.symd_contains(al)
                and spaces.symd_contains(al + al2)):
            return HermIsometry("not_isometric", reason="symd-translation-family")
    out = _skew_one_dim_test(h, h2, budget)
    if out is not None:
        return out
    out = _hamilton_plus_classify(h, h2, budget)
    if out is not None:
        return out
    # quadratic-side refutations on the pi-invariants
    q1 = pi_invariant(h, pi)
    q2 = pi_invariant(h2, pi)
    if F.kind == "Q":
        if ratqf.inertia(q1.polar_matrix()) != ratqf.inertia(q2.polar_matrix()):
            return HermIsometry("not_isometric", reason="signature")
    # isotropy mismatch is decisive when the other side is certified
    s1 = isotropy_search(h, budget)
    s2 = isotropy_search(h2, budget)
    if {s1.status, s2.status} == {"found", "anisotropic"}:
        return HermIsometry("not_isometric", reason="isotropy")
    f = _peel_isometry(h, h2, budget)
    if f is not None and _verify_herm_isometry(h, h2, f):
        return HermIsometry("isometric", f=f)
    # a congruence with small entries one way needs tall entries the other
    # way, so a failed peel may still succeed in reverse
    g = _peel_isometry(h2, h, budget)
    if g is not None:
        gi = g.inverse()
        if gi is not None and _verify_herm_isometry(h, h2, gi):
            return HermIsometry("isometric", f=gi)
    from . import witt
    # herm_bridge off: these invariants point right back at (h, h2)
    qout = witt.d_isometry_test(q1, q2, budget=budget, herm_bridge=False)
    if qout.status == "isometric":
        if not _verify_herm_isometry(h, h2, qout.f):
            raise HermitianError(
                "quadratic-level isometry failed hermitian re-verification")
        return HermIsometry("isometric", f=qout.f)
    if qout.status == "not_isometric":
        return HermIsometry("not_isometric", reason=f"quadratic:{qout.reason}")
    return HermIsometry("unknown")


# ------------------------------------------------------------- extension

def base_change(h: HermitianSpace, K: Field) -> HermitianSpace:
    if K == h.space.F:
        return h
    sigK = involution_extend(h.sigma, K)
    AK = sigK.A
    g = [[AK.element([K.embed(c) for c in x.coords]) for x in row]
         for row in h.gram]
    return HermitianSpace(sigK, h.lam, g)


def functoriality_check(h: HermitianSpace, pi: PiFunctional, K: Field) -> bool:
    """q_{h_K, pi_K} equals (q_{h,pi})_K as exact Gram matrices."""
    hK = base_change(h, K)
    piK = pi_extend(pi, K)
    q_ext = pi_invariant(hK, piK)
    q = pi_invariant(h, pi)
    m = len(q.gram_upper)
    for r in range(m):
        for c in range(m):
            if q_ext.gram_upper[r][c] != K.embed(q.gram_upper[r][c]):
                return False
    return True


# ------------------------------------------------------------- realize

def realize(q: QuadraticDSpace, pi: PiFunctional) -> HermitianSpace:
    """Rebuild the hermitian form from an admitting quadratic D-form: for
    each basis pair the Gram entry w is pinned by the trace system
    Trd(w d_t) = b_q(u, v d_t) / (2 alpha)."""
    A = q.space.D
    if pi.spaces.A != A:
        raise AlgebraMismatch("pi on a different algebra")
    if A.char != 0:
        raise HermitianError("realization route needs characteristic 0")
    if pi.spaces.lam != 1:
        raise HermitianError("realization route needs lambda = +1")
    sigma = pi.spaces.sigma
    ok, witness = admits_D(q, sigma)
    if not ok:
        raise NotAdmitting(witness)
    try:
        alpha = pi_symmetric_decompose(pi)
    except (NotSymmetric, NotTraceLike) as e:
        raise NotSymmetricPi(str(e))
    if alpha.is_zero():
        raise AlphaZero("pi decomposes through a zero multiple of Trd")
    F = A.F
    db = A.basis()
    trace_rows = [[A.trd(db[m] * db[t]) for m in range(4)] for t in range(4)]
    half = F.one / (F.scalar(2) * alpha)
    n = q.space.n
    ebasis = q.space.d_basis()
    G: list[list[Quat]] = []
    for r in range(n):
        row = []
        for c in range(n):
            rhs = [q.polar(ebasis[r], ebasis[c] * db[t]) * half for t in range(4)]
            sol = flin.solve(F, trace_rows, rhs)
            assert sol is not None, "trace pairing is nondegenerate"
            row.append(A.element(sol))
        G.append(row)
    try:
        h = HermitianSpace(sigma, 1, G)
    except NotLambdaSymmetric as e:
        raise VerificationFailed(f"gram not sigma-symmetric at {e.entry}")
    qh = pi_invariant(h, pi)
    if qh.gram_upper != q.gram_upper:
        raise VerificationFailed("pi-invariant of the rebuilt form differs")
    return h
