"""Quadratic forms on right D-spaces.

A form lives on the induced 4n-dimensional F-space as an upper-triangular
Gram matrix U (q(x) = x^T U x), which pins a unique representation in both
characteristics; the polar form is B = U + U^T.  Whether q is a *quadratic
D-form* — every (vD)-perp is D-stable — is undecidable by sampling alone,
so forms carry a tri-state certificate: certified (by a construction
route or an exact small-dimension decision), refuted (with an exact
witness u in (vD)-perp and u*d outside), or sampled-only.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence, Union

from . import flin
from .algebra import Involution, PiFunctional, Quat, QuaternionAlgebra
from .dlinalg import (
    DSubspace, DVector, FSubspace, RightDSpace, SpaceMismatch, span_D,
)
from .scalars import Scalar


class DFormError(Exception):
    pass


class AlgebraMismatch(DFormError):
    pass


class ZeroVector(DFormError):
    pass


class NotADForm(DFormError):
    """Raised when an operation that needs the D-form property hits an
    exact refutation; carries the witness (v, u, d)."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"not a quadratic D-form; witness {witness}")


class SearchExhausted(DFormError):
    pass


class DFormCertificate:
    """Tri-state: certified(reason) / refuted(v, u, d) / sampled(count)."""

    def __init__(self, status: str, reason: Optional[str] = None,
                 witness=None, samples: int = 0):
        self.status = status  # "certified" | "refuted" | "sampled"
        self.reason = reason
        self.witness = witness
        self.samples = samples

    @classmethod
    def certified(cls, reason: str) -> "DFormCertificate":
        return cls("certified", reason=reason)

    @classmethod
    def refuted(cls, v: DVector, u: DVector, d: Quat) -> "DFormCertificate":
        return cls("refuted", witness=(v, u, d))

    @classmethod
    def sampled(cls, samples: int) -> "DFormCertificate":
        return cls("sampled", samples=samples)

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.status == "certified":
            out["reason"] = self.reason
        elif self.status == "refuted":
            v, u, d = self.witness
            out["witness"] = {"v": v.to_json(), "u": u.to_json(),
                              "d": [str(c) for c in d.coords]}
        else:
            out["samples"] = self.samples
        return out

    def __repr__(self):
        if self.status == "certified":
            return f"CertifiedDForm({self.reason})"
        if self.status == "refuted":
            return f"RefutedDForm(witness={self.witness})"
        return f"SampledOnly({self.samples})"


class PiProvenance:
    """Construction data for forms built as pi-invariants of (skew-)hermitian
    forms: enough to push isometry questions back to the hermitian level."""

    def __init__(self, sigma: Involution, lam: int, pi: PiFunctional,
                 herm_gram: list[list[Quat]]):
        self.sigma = sigma
        self.lam = lam
        self.pi = pi
        self.herm_gram = herm_gram

    def same_pi(self, other: "PiProvenance") -> bool:
        return (self.sigma == other.sigma and self.lam == other.lam
                and self.pi.coefficients == other.pi.coefficients)


def herm_gram_eval(sigma: Involution, G: list[list[Quat]],
                   u: DVector, v: DVector) -> Quat:
    """sum sigma(u_i) G[i][j] v_j."""
    D = sigma.A
    acc = D.zero
    for i, ui in enumerate(u.entries):
        if ui.is_zero():
            continue
        sui = sigma(ui)
        for j, vj in enumerate(v.entries):
            if vj.is_zero() or G[i][j].is_zero():
                continue
            acc = acc + sui * G[i][j] * vj
    return acc


class QuadraticDSpace:
    def __init__(self, space: RightDSpace, gram: Sequence[Sequence],
                 certificate: Optional[DFormCertificate] = None,
                 provenance: Optional[PiProvenance] = None):
        self.space = space
        F = space.F
        m = space.dim_F
        rows = [[F.scalar(x) for x in r] for r in gram]
        if len(rows) != m or any(len(r) != m for r in rows):
            raise SpaceMismatch(f"gram must be {m}x{m}")
        # canonicalize to upper triangular
        U = [[F.zero] * m for _ in range(m)]
        for i in range(m):
            U[i][i] = rows[i][i]
            for j in range(i + 1, m):
                U[i][j] = rows[i][j] + rows[j][i]
        self.gram_upper = U
        self._polar = None
        if certificate is None:
            if self._polar_is_zero():
                certificate = DFormCertificate.certified("totally-singular")
            else:
                certificate = DFormCertificate.sampled(0)
        self.certificate = certificate
        self.provenance = provenance
        self._spot_check()

    @property
    def dim(self) -> int:
        return self.space.n

    def polar_matrix(self) -> list[list[Scalar]]:
        if self._polar is None:
            m = self.space.dim_F
            U = self.gram_upper
            self._polar = [[U[i][j] + U[j][i] for j in range(m)] for i in range(m)]
        return self._polar

    def _polar_is_zero(self) -> bool:
        return all(x.is_zero() for row in self.polar_matrix() for x in row)

    def evaluate(self, v: DVector) -> Scalar:
        if v.space != self.space:
            raise SpaceMismatch("vector from a different space")
        x = v.f_coords()
        F = self.space.F
        acc = F.zero
        U = self.gram_upper
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j in range(i, len(x)):
                if x[j].is_zero() or U[i][j].is_zero():
                    continue
                acc = acc + U[i][j] * xi * x[j]
        return acc

    def polar(self, u: DVector, v: DVector) -> Scalar:
        if u.space != self.space or v.space != self.space:
            raise SpaceMismatch("vector from a different space")
        xu, xv = u.f_coords(), v.f_coords()
        B = self.polar_matrix()
        F = self.space.F
        acc = F.zero
        for i, xi in enumerate(xu):
            if xi.is_zero():
                continue
            for j, xj in enumerate(xv):
                if xj.is_zero() or B[i][j].is_zero():
                    continue
                acc = acc + xi * B[i][j] * xj
        return acc

    def _spot_check(self):
        rng = random.Random(997)
        F = self.space.F
        for _ in range(5):
            v = self.space.sample(rng, 1)
            a = F.sample(rng, 2)
            assert self.evaluate(v * a) == a * a * self.evaluate(v)
            u = self.space.sample(rng, 1)
            lhs = self.evaluate(u + v) - self.evaluate(u) - self.evaluate(v)
            assert lhs == self.polar(u, v)

    def to_json(self) -> dict:
        return {
            "space": {"algebra": self.space.D.to_json(), "dim": self.space.n},
            "gram_upper": [[str(x) for x in row] for row in self.gram_upper],
        }

    def __repr__(self):
        return (f"QuadraticDSpace(dim_D={self.dim} over {self.space.D!r}, "
                f"{self.certificate!r})")


# ---------------------------------------------------------------- basics

def evaluate(q: QuadraticDSpace, v: DVector) -> Scalar:
    return q.evaluate(v)


def polar(q: QuadraticDSpace, u: DVector, v: DVector) -> Scalar:
    return q.polar(u, v)


def scale(alpha, q: QuadraticDSpace) -> QuadraticDSpace:
    F = q.space.F
    a = F.scalar(alpha)
    gram = [[a * x for x in row] for row in q.gram_upper]
    prov = None
    cert = None
    if a.is_zero():
        pass  # constructor certifies the zero form as totally singular
    else:
        if q.provenance is not None:
            # alpha * q_{h,pi} = q_{alpha*h, pi}; keeping pi lets scaled
            # forms stay compatible with their unscaled siblings
            p = q.provenance
            G = [[x * a for x in row] for row in p.herm_gram]
            prov = PiProvenance(p.sigma, p.lam, p.pi, G)
        if q.certificate.status == "certified":
            cert = DFormCertificate.certified(q.certificate.reason)
        elif q.certificate.status == "refuted":
            v, u, d = q.certificate.witness
            cert = DFormCertificate.refuted(v, u, d)
    return QuadraticDSpace(q.space, gram, certificate=cert, provenance=prov)


def _perp_of_f_vectors(q: QuadraticDSpace, vectors: list[list[Scalar]]) -> FSubspace:
    F = q.space.F
    B = q.polar_matrix()
    rows = [flin.mat_vec(B, w) for w in vectors]
    if not rows:
        return FSubspace(q.space, flin.identity(F, q.space.dim_F))
    return FSubspace(q.space, flin.kernel_basis(F, rows))


def perp(q: QuadraticDSpace, W: DSubspace) -> FSubspace:
    if W.space != q.space:
        raise SpaceMismatch("subspace of a different space")
    vecs = []
    for b in W.basis:
        for d in q.space.D.basis():
            vecs.append((b * d).f_coords())
    return _perp_of_f_vectors(q, vecs)


def perp_f(q: QuadraticDSpace, S: FSubspace) -> FSubspace:
    return _perp_of_f_vectors(q, [list(r) for r in S.f_basis])


def radical(q: QuadraticDSpace) -> FSubspace:
    B = q.polar_matrix()
    F = q.space.F
    return FSubspace(q.space, flin.kernel_basis(F, B))


# ---------------------------------------------------------------- certify

def _one_dim_decision(q: QuadraticDSpace) -> DFormCertificate:
    """Exact D-form decision on a 1-dimensional D-space over a division-like
    algebra: the only proper perp is V-perp = rad, which must be D-stable."""
    rad = radical(q)
    w = rad.d_stable_witness()
    if w is None:
        return DFormCertificate.certified("one-dim-dichotomy")
    u, d = w
    v = q.space.basis_vector(0)
    # u*d escapes rad = (vD)-perp, which is exactly the refutation shape
    return DFormCertificate.refuted(v, u, d)


def certify_dform(q: QuadraticDSpace, budget: int = 40) -> DFormCertificate:
    """Certificate routes first, then exact small cases, then sampling."""
    if q.certificate.status in ("certified", "refuted"):
        return q.certificate
    if q.provenance is not None:
        q.certificate = DFormCertificate.certified("pi-invariant")
        return q.certificate
    if q._polar_is_zero():
        q.certificate = DFormCertificate.certified("totally-singular")
        return q.certificate
    if q.dim == 0:
        q.certificate = DFormCertificate.certified("totally-singular")
        return q.certificate
    if q.dim == 1 and q.space.D.is_division_like():
        q.certificate = _one_dim_decision(q)
        return q.certificate
    # sampled refutation search
    candidates: list[DVector] = list(q.space.d_basis())
    n = q.space.n
    for s in range(n):
        for t in range(s + 1, n):
            candidates.append(q.space.basis_vector(s) + q.space.basis_vector(t))
    rng = random.Random(4099)
    while len(candidates) < budget:
        candidates.append(q.space.sample(rng, 2))
    samples = 0
    for v in candidates[:budget]:
        if v.is_zero():
            continue
        samples += 1
        P = perp(q, span_D([v], q.space))
        w = P.d_stable_witness()
        if w is not None:
            u, d = w
            q.certificate = DFormCertificate.refuted(v, u, d)
            return q.certificate
    q.certificate = DFormCertificate.sampled(samples)
    return q.certificate


# ---------------------------------------------------------------- cyclic

NONSINGULAR = "Nonsingular"
TOTALLY_SINGULAR = "TotallySingular"
MIXED = "Mixed"


def _cyclic_polar_block(q: QuadraticDSpace, v: DVector) -> list[list[Scalar]]:
    vecs = [(v * d).f_coords() for d in q.space.D.basis()]
    B = q.polar_matrix()
    return [[_bilinear(q.space.F, x, B, y) for y in vecs] for x in vecs]


def _bilinear(F, x, B, y) -> Scalar:
    acc = F.zero
    for i, xi in enumerate(x):
        if xi.is_zero():
            continue
        for j, yj in enumerate(y):
            if yj.is_zero() or B[i][j].is_zero():
                continue
            acc = acc + xi * B[i][j] * yj
    return acc


def cyclic_type(q: QuadraticDSpace, v: DVector) -> str:
    if v.is_zero():
        raise ZeroVector("cyclic type needs v != 0")
    blk = _cyclic_polar_block(q, v)
    r = flin.rank(blk)
    if r == 4:
        return NONSINGULAR
    if r == 0:
        return TOTALLY_SINGULAR
    return MIXED


def mixed_block_witness(q: QuadraticDSpace, v: DVector) -> tuple[DVector, DVector, Quat]:
    """For a Mixed cyclic block: an exact (v, u, d) refutation of the
    D-form property (u in (vD)-perp, u*d outside)."""
    P = perp(q, span_D([v], q.space))
    w = P.d_stable_witness()
    if w is None:
        raise DFormError("cyclic block is Mixed but (vD)-perp is D-stable?")
    u, d = w
    return (v, u, d)


# ---------------------------------------------------------------- sums

def orth_sum(q: QuadraticDSpace, q2: QuadraticDSpace) -> QuadraticDSpace:
    if q.space.D != q2.space.D:
        raise AlgebraMismatch("summands over different algebras")
    D = q.space.D
    F = q.space.F
    n1, n2 = q.space.n, q2.space.n
    space = RightDSpace(D, n1 + n2)
    m1, m2 = 4 * n1, 4 * n2
    gram = [[F.zero] * (m1 + m2) for _ in range(m1 + m2)]
    for i in range(m1):
        for j in range(m1):
            gram[i][j] = q.gram_upper[i][j]
    for i in range(m2):
        for j in range(m2):
            gram[m1 + i][m1 + j] = q2.gram_upper[i][j]
    prov = None
    cert = None
    if (q.provenance is not None and q2.provenance is not None
            and q.provenance.same_pi(q2.provenance)):
        G1, G2 = q.provenance.herm_gram, q2.provenance.herm_gram
        z = D.zero
        G = [[G1[i][j] if j < n1 else z for j in range(n1 + n2)] for i in range(n1)]
        G += [[z if j < n1 else G2[i - n1][j - n1] for j in range(n1 + n2)]
              for i in range(n1, n1 + n2)]
        prov = PiProvenance(q.provenance.sigma, q.provenance.lam,
                            q.provenance.pi, G)
        cert = DFormCertificate.certified("orth-of-compatible")
    return QuadraticDSpace(space, gram, certificate=cert, provenance=prov)


def compatible(q: QuadraticDSpace, q2: QuadraticDSpace,
               budget: int = 40) -> DFormCertificate:
    """Tri-state D-compatibility: the certificate of the orthogonal sum."""
    return certify_dform(orth_sum(q, q2), budget=budget)


# ---------------------------------------------------------------- restrict

def restrict_basis(q: QuadraticDSpace, vectors: list[DVector]) -> QuadraticDSpace:
    """Restriction of q to the span of an ordered D-independent family,
    expressed in exactly that basis."""
    D = q.space.D
    F = q.space.F
    n = len(vectors)
    if vectors and span_D(vectors, q.space).dim != n:
        raise SpaceMismatch("restriction basis is not D-independent")
    sub = RightDSpace(D, n)
    fvecs = []
    for b in vectors:
        for d in D.basis():
            fvecs.append(b * d)
    m = 4 * n
    gram = [[F.zero] * m for _ in range(m)]
    for i in range(m):
        gram[i][i] = q.evaluate(fvecs[i])
        for j in range(i + 1, m):
            gram[i][j] = q.polar(fvecs[i], fvecs[j])
    cert = None
    if q.certificate.status == "certified":
        cert = DFormCertificate.certified("restriction")
    prov = None
    if q.provenance is not None:
        p = q.provenance
        G = [[herm_gram_eval(p.sigma, p.herm_gram, vectors[r], vectors[s])
              for s in range(n)] for r in range(n)]
        prov = PiProvenance(p.sigma, p.lam, p.pi, G)
    return QuadraticDSpace(sub, gram, certificate=cert, provenance=prov)


def restrict(q: QuadraticDSpace, W: DSubspace) -> QuadraticDSpace:
    if W.space != q.space:
        raise SpaceMismatch("subspace of a different space")
    return restrict_basis(q, list(W.basis))


# ---------------------------------------------------------------- admits-D

def admits_D(q: QuadraticDSpace, sigma: Involution):
    """Check b(u*d, v) = b(u, v*sigma(d)) on all basis triples; certifies on
    success, returns (False, (u, v, d)) on failure."""
    if sigma.A != q.space.D:
        raise AlgebraMismatch("involution on a different algebra")
    fb = q.space.f_basis()
    for u in fb:
        for v in fb:
            for d in q.space.D.basis():
                if q.polar(u * d, v) != q.polar(u, v * sigma(d)):
                    return (False, (u, v, d))
    if q.certificate.status != "refuted":
        q.certificate = DFormCertificate.certified("admits-D")
    return (True, None)


# ---------------------------------------------------------------- rems

def rems_counterexample(D: QuaternionAlgebra):
    """The orthogonal-sum failure: two certified 1-dimensional quadratic
    D-forms q, q2 with q ⊥ (-q2) not a D-form, plus the exact witness."""
    F = D.F
    V = RightDSpace(D, 1)
    one = F.one
    zero = F.zero
    if D.char == 0:
        two, three = F.scalar(2), F.scalar(3)
        phi = [[one, one], [zero, one]]          # x^2 + xy + y^2
        phi2 = [[one, two], [zero, three]]       # x^2 + 2xy + 3y^2
        rho = [[one, zero], [zero, one]]         # z^2 + w^2
    else:
        t = D.b  # any scalar != 0, 1 would do; b is handy and nonzero
        phi = [[one, one], [zero, one]]          # x^2 + xy + y^2
        phi2 = [[one, t], [zero, one]]           # x^2 + t*xy + y^2
        rho = [[one, one], [zero, one]]          # z^2 + zw + w^2

    def block4(top, bottom):
        g = [[zero] * 4 for _ in range(4)]
        for i in range(2):
            for j in range(2):
                g[i][j] = top[i][j]
                g[2 + i][2 + j] = bottom[i][j]
        return g

    q = QuadraticDSpace(V, block4(phi, rho))
    q2 = QuadraticDSpace(V, block4(phi2, rho))
    certify_dform(q)
    certify_dform(q2)
    assert q.certificate.status == "certified"
    assert q2.certificate.status == "certified"
    s = orth_sum(q, scale(-1, q2))
    V2 = s.space
    d_basis = D.basis()
    v = V2.vector([D.one, D.one])
    u = V2.vector([d_basis[2], d_basis[2]])
    P = perp(s, span_D([v], V2))
    assert P.contains_vector(u), "u must start inside (vD)-perp"
    witness = None
    for d in d_basis:
        if not P.contains_vector(u * d):
            witness = DFormCertificate.refuted(v, u, d)
            break
    assert witness is not None, "some basis d must escape"
    s.certificate = witness
    return q, q2, witness


# ---------------------------------------------------------------- diagonalize

class DDiagonalization:
    """Orthogonal D-basis: radical vectors first, then nonsingular cyclic
    block generators."""

    def __init__(self, rad_basis: list[DVector], block_basis: list[DVector]):
        self.rad_basis = rad_basis
        self.block_basis = block_basis

    @property
    def basis(self) -> list[DVector]:
        return list(self.rad_basis) + list(self.block_basis)

    def __repr__(self):
        return (f"DDiagonalization(rad={len(self.rad_basis)}, "
                f"blocks={len(self.block_basis)})")


def _nonsingular_vector_search(q: QuadraticDSpace, C: DSubspace,
                               budget: int = 200) -> Optional[DVector]:
    """A v in C with nonsingular cyclic block; raises NotADForm on a Mixed
    block (exact refutation)."""
    cands: list[DVector] = list(C.basis)
    m = len(C.basis)
    for i in range(m):
        for j in range(i + 1, m):
            cands.append(C.basis[i] + C.basis[j])
    for i in range(m):
        for j in range(m):
            if i != j:
                for d in q.space.D.basis()[1:]:
                    cands.append(C.basis[i] + C.basis[j] * d)
    rng = random.Random(8111)
    while len(cands) < budget:
        v = C.space.zero_vector()
        for b in C.basis:
            v = v + b * q.space.D.sample(rng, 1)
        cands.append(v)
    seen = set()
    for v in cands[:budget]:
        if v.is_zero() or v in seen:
            continue
        seen.add(v)
        ct = cyclic_type(q, v)
        if ct == NONSINGULAR:
            return v
        if ct == MIXED:
            raise NotADForm(mixed_block_witness(q, v))
    return None


def d_diagonalize(q: QuadraticDSpace, budget: int = 200) -> DDiagonalization:
    """Split off the radical, then peel nonsingular cyclic blocks."""
    space = q.space
    D = space.D
    if space.n == 0:
        return DDiagonalization([], [])
    rad = radical(q)
    w = rad.d_stable_witness()
    if w is not None:
        u, d = w
        # u is in V-perp, hence in every (vD)-perp; u*d escapes V-perp, so
        # some basis pairing is nonzero and names a v whose perp loses u*d
        for s in range(space.n):
            for dt in D.basis():
                if not q.polar(u * d, space.basis_vector(s) * dt).is_zero():
                    raise NotADForm((space.basis_vector(s), u, d))
        raise DFormError("radical escape pairs to zero with everything?")
    rad_basis: list[DVector] = []
    if rad.dim > 0:
        rad_sub = rad.to_d_subspace()
        rad_basis = list(rad_sub.basis)
    else:
        rad_sub = DSubspace(space, [])
    # greedy complement of the radical
    comp: list[DVector] = []
    current = rad_sub
    for s in range(space.n):
        e = space.basis_vector(s)
        if not current.contains(e):
            comp.append(e)
            current = span_D(list(current.basis) + [e], space)
    assert len(comp) + rad_sub.dim == space.n
    C = span_D(comp, space) if comp else DSubspace(space, [])
    blocks: list[DVector] = []
    while C.dim > 0:
        v = _nonsingular_vector_search(q, C, budget=budget)
        if v is None:
            raise SearchExhausted(
                f"no nonsingular cyclic vector found in {C!r} within budget")
        blocks.append(v)
        Pf = perp(q, span_D([v], space)).intersect(C.as_f_subspace())
        ws = Pf.d_stable_witness()
        if ws is not None:
            u, d = ws
            if not perp(q, span_D([v], space)).contains_vector(u * d):
                raise NotADForm((v, u, d))
            raise DFormError("perp stable but intersection unstable?")
        newC = Pf.to_d_subspace() if Pf.dim else DSubspace(space, [])
        assert newC.dim == C.dim - 1, "nonsingular block must split off cleanly"
        C = newC
    # exact pairwise orthogonality across all returned generators
    alldvs = rad_basis + blocks
    db = D.basis()
    for i in range(len(alldvs)):
        for j in range(i + 1, len(alldvs)):
            for d1 in db:
                for d2 in db:
                    assert q.polar(alldvs[i] * d1, alldvs[j] * d2).is_zero()
    return DDiagonalization(rad_basis, blocks)
