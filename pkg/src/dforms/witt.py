"""Witt-style decomposition of quadratic D-forms.

D-isotropy search (a vector with q vanishing on the whole line vD),
metabolic-plane splitting, the decomposition q = (hyperbolic-like
planes) perp (kernel), D-metabolicity with explicit lagrangians, and
the isometry test through "q perp (-q') is D-metabolic".

Isotropy over global fields is undecidable by bounded search alone, so
every outcome that depends on a search is a tri-state; anisotropy
certificates come from exact routes only (definiteness of the induced
F-form, the square-subfield decision for totally singular char-2 forms,
or a reduction to the hermitian construction data carried by forms with
provenance).
"""

from __future__ import annotations

import itertools
from typing import Optional

from . import flin, ratqf
from .dform import (
    AlgebraMismatch, NotADForm, PiProvenance, QuadraticDSpace,
    orth_sum, perp, radical, restrict_basis, scale,
)
from .dlinalg import (
    DMatrix, DSubspace, DVector, RightDSpace, SpaceMismatch,
    d_dense_candidates, d_vector_candidates, span_D,
)
from .scalars import Scalar, gf2_is_square, gf2_mul, gf2_sqrt


class WittError(Exception):
    pass


class Singular(WittError):
    pass


class NotDIsotropic(WittError):
    pass


# ------------------------------------------------------------- isotropy

class IsotropyOutcome:
    """status: found / anisotropic / unknown."""

    def __init__(self, status: str, v: Optional[DVector] = None,
                 certificate: str = "", samples: int = 0):
        self.status = status
        self.v = v
        self.certificate = certificate
        self.samples = samples

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.status == "found":
            out["v"] = self.v.to_json()
        elif self.status == "anisotropic":
            out["certificate"] = self.certificate
        else:
            out["samples"] = self.samples
        return out

    def __repr__(self):
        if self.status == "found":
            return f"Found({self.v})"
        if self.status == "anisotropic":
            return f"AnisotropicCertified({self.certificate})"
        return f"Unknown(samples={self.samples})"


def is_d_isotropic_vector(q: QuadraticDSpace, v: DVector) -> bool:
    """q restricted to vD vanishes identically (values and polars)."""
    if v.is_zero():
        return False
    db = q.space.D.basis()
    line = [v * d for d in db]
    for x in line:
        if not q.evaluate(x).is_zero():
            return False
    for i in range(4):
        for j in range(i + 1, 4):
            if not q.polar(line[i], line[j]).is_zero():
                return False
    return True


def _char2_even_odd_sqrt(x: Scalar) -> tuple[Scalar, Scalar]:
    """For g over GF(2)(t): (sqrt of even part, sqrt of odd part) with
    g = E^2 + t*O^2."""
    F = x.field
    num, den = x.v
    p = gf2_mul(num, den)  # g = p / den^2
    pe = 0
    i = 0
    pp = p
    while pp:
        if pp & 1 and i % 2 == 0:
            pe |= 1 << i
        pp >>= 1
        i += 1
    po = p ^ pe
    e = Scalar(F, F._reduce(gf2_sqrt(pe), den))
    o = Scalar(F, F._reduce(gf2_sqrt(po >> 1), den))
    return e, o


def _char2_totally_singular_decision(q: QuadraticDSpace) -> IsotropyOutcome:
    """Exact D-isotropy decision for totally singular forms over GF(2)(t).
    With the polar form zero, q is additive, so q(v d) = sum_i x_i^2 g_i
    with g_i = q(f_i d); writing each g over the square subfield
    (g = E^2 + t O^2, and A^2 + t B^2 = 0 forces A = B = 0 since t is
    not a square) turns D-isotropy into a plain F-linear kernel."""
    space = q.space
    F = space.F
    fb = space.f_basis()
    rows = []
    for d in space.D.basis():
        g = [q.evaluate(x * d) for x in fb]
        rows.append([_char2_even_odd_sqrt(x)[0] for x in g])
        rows.append([_char2_even_odd_sqrt(x)[1] for x in g])
    ker = flin.kernel_basis(F, rows)
    for y in ker:
        v = space.from_f_coords(y)
        if not v.is_zero():
            assert is_d_isotropic_vector(q, v)
            return IsotropyOutcome("found", v=v)
    return IsotropyOutcome("anisotropic", certificate="ExhaustiveSmallField")


def _pi_separates(prov: PiProvenance) -> bool:
    """Whether pi(sigma(d) s d) = 0 for all d forces s = 0 on Sym_lambda;
    this makes isotropy transfer between h and its pi-invariant exact."""
    spaces = prov.pi.spaces
    A = spaces.A
    sig = prov.sigma
    db = A.basis()
    rows = []
    for t in range(4):
        rows.append([prov.pi(sig(db[t]) * s * db[t]) for s in spaces.sym_basis])
    for t in range(4):
        for u in range(t + 1, 4):
            rows.append([
                prov.pi(sig(db[t]) * s * db[u] + sig(db[u]) * s * db[t])
                for s in spaces.sym_basis])
    return flin.rank(rows) == len(spaces.sym_basis)


def _hermitian_anisotropic_from_provenance(prov: PiProvenance) -> Optional[str]:
    A = prov.sigma.A
    F = A.F
    G = prov.herm_gram
    n = len(G)
    if n == 1 and A.is_division_like():
        if not A.nrd(G[0][0]).is_zero():
            return "unit diagonal"
    if (F.kind == "Q" and A.char == 0 and prov.lam == 1
            and A.a.v < 0 and A.b.v < 0 and n >= 1):
        diag_ok = all(G[i][j].is_zero() for i in range(n) for j in range(n)
                      if i != j)
        if diag_ok:
            scalars = []
            for i in range(n):
                g = G[i][i]
                if any(not c.is_zero() for c in g.coords[1:]):
                    return None
                scalars.append(g.coords[0])
            if all(not c.is_zero() for c in scalars):
                signs = {c.v > 0 for c in scalars}
                if len(signs) == 1:
                    return "definite diagonal"
    return None


def d_isotropic_search(q: QuadraticDSpace, budget: int = 300) -> IsotropyOutcome:
    if q.space.n == 0:
        return IsotropyOutcome("anisotropic", certificate="empty")
    if q.space.F.kind == "F2t" and q._polar_is_zero():
        return _char2_totally_singular_decision(q)
    if q.space.F.kind == "Q":
        kind = ratqf.definiteness(q.polar_matrix())
        if kind in ("positive", "negative"):
            return IsotropyOutcome("anisotropic", certificate="Definite")
    if q.provenance is not None and _pi_separates(q.provenance):
        detail = _hermitian_anisotropic_from_provenance(q.provenance)
        if detail is not None:
            return IsotropyOutcome(
                "anisotropic", certificate="HermitianReduction")
    samples = 0
    for v in itertools.islice(d_vector_candidates(q.space), budget):
        samples += 1
        if is_d_isotropic_vector(q, v):
            return IsotropyOutcome("found", v=v)
    # the projective stream normalizes pivots, so witnesses like (d, 1)
    # reappear with tall fractional coordinates; sweep densely too
    for v in itertools.islice(d_dense_candidates(q.space), budget):
        samples += 1
        if is_d_isotropic_vector(q, v):
            return IsotropyOutcome("found", v=v)
    return IsotropyOutcome("unknown", samples=samples)


# ------------------------------------------------------------- splitting

class MetabolicPlane:
    """vD + wD with q vanishing on vD and the plane nonsingular."""

    def __init__(self, v: DVector, w: DVector, sub: DSubspace,
                 form: QuadraticDSpace):
        self.v = v
        self.w = w
        self.sub = sub
        self.form = form

    def __repr__(self):
        return f"MetabolicPlane(v={self.v}, w={self.w})"


def _pullback_equal(q: QuadraticDSpace, M: DMatrix,
                    target: QuadraticDSpace) -> bool:
    """target == q pulled back through M, checked on the induced F-basis."""
    fb = target.space.f_basis()
    images = [M.apply(x) for x in fb]
    for r in range(len(fb)):
        if q.evaluate(images[r]) != target.evaluate(fb[r]):
            return False
        for c in range(r + 1, len(fb)):
            if q.polar(images[r], images[c]) != target.polar(fb[r], fb[c]):
                return False
    return True


def split_metabolic_plane(q: QuadraticDSpace, v: DVector):
    """Split off the plane vD + wD; returns (plane, rest-form, columns)
    where columns = [v, w] + rest basis realize the isometry
    q ~ q|plane perp q|rest."""
    if radical(q).dim != 0:
        raise Singular("splitting needs a nonsingular form")
    if not is_d_isotropic_vector(q, v):
        raise NotDIsotropic(f"{v} does not kill the whole line vD")
    w = None
    for cand in q.space.f_basis():
        if not q.polar(v, cand).is_zero():
            w = cand
            break
    if w is None:
        raise Singular("no partner pairs with v; polar form degenerate on v")
    sub = span_D([v, w], q.space)
    if sub.dim != 2:
        raise WittError("plane collapsed")
    plane_form = restrict_basis(q, [v, w])
    if radical(plane_form).dim != 0:
        raise WittError("plane is singular; metabolic split impossible")
    P = perp(q, sub)
    ws = P.d_stable_witness()
    if ws is not None:
        u, d = ws
        raise NotADForm((v, u, d))
    rest_sub = P.to_d_subspace() if P.dim else DSubspace(q.space, [])
    if rest_sub.dim != q.space.n - 2:
        raise WittError("perp dimension off; plane not split cleanly")
    rest_form = restrict_basis(q, list(rest_sub.basis))
    plane = MetabolicPlane(v, w, sub, plane_form)
    cols = [v, w] + list(rest_sub.basis)
    M = DMatrix(q.space.D, [[c.entries[i] for c in cols]
                            for i in range(q.space.n)])
    assert _pullback_equal(q, M, orth_sum(plane_form, rest_form))
    return plane, rest_form, cols


# ------------------------------------------------------------- decompose

class WittReport:
    def __init__(self, planes: list[MetabolicPlane],
                 anisotropic_kernel: QuadraticDSpace,
                 kernel_status: IsotropyOutcome,
                 change_of_basis: DMatrix,
                 kernel_map: list[DVector]):
        self.planes = planes
        self.anisotropic_kernel = anisotropic_kernel
        self.kernel_status = kernel_status
        self.change_of_basis = change_of_basis
        self.kernel_map = kernel_map

    def to_json(self) -> dict:
        return {
            "planes": [{"v": p.v.to_json(), "w": p.w.to_json()}
                       for p in self.planes],
            "kernel": self.anisotropic_kernel.to_json(),
            "kernel_status": self.kernel_status.to_json(),
            "basis_change": [[[str(c) for c in x.coords] for x in row]
                             for row in self.change_of_basis.rows],
        }

    def __repr__(self):
        return (f"WittReport(planes={len(self.planes)}, "
                f"kernel_dim={self.anisotropic_kernel.space.n}, "
                f"{self.kernel_status!r})")


def witt_decompose(q: QuadraticDSpace, budget: int = 300) -> WittReport:
    if radical(q).dim != 0:
        raise Singular("decomposition needs a nonsingular form")
    space = q.space
    planes: list[MetabolicPlane] = []
    cur_form = q
    cur_map = list(space.d_basis())
    kernel_status = None
    while True:
        out = d_isotropic_search(cur_form, budget)
        if out.status != "found":
            kernel_status = out
            break
        v_cur = out.v
        _plane, rest_form, cols = split_metabolic_plane(cur_form, v_cur)
        v_orig = _combine(cur_map, cols[0])
        w_orig = _combine(cur_map, cols[1])
        planes.append(MetabolicPlane(
            v_orig, w_orig, span_D([v_orig, w_orig], space),
            restrict_basis(q, [v_orig, w_orig])))
        cur_map = [_combine(cur_map, c) for c in cols[2:]]
        cur_form = rest_form
    kernel = restrict_basis(q, cur_map)
    assert 2 * len(planes) + kernel.space.n == space.n
    cols = []
    for p in planes:
        cols.extend([p.v, p.w])
    cols.extend(cur_map)
    M = DMatrix(space.D, [[c.entries[i] for c in cols]
                          for i in range(space.n)])
    target = kernel
    for p in reversed(planes):
        target = orth_sum(p.form, target)
    assert _pullback_equal(q, M, target)
    return WittReport(planes, kernel, kernel_status, M, cur_map)


def _combine(vmap: list[DVector], v: DVector) -> DVector:
    out = vmap[0].space.zero_vector() if vmap else v.space.zero_vector()
    for base, c in zip(vmap, v.entries):
        out = out + base * c
    return out


# ------------------------------------------------------------- metabolic

class MetabolicOutcome:
    """status: true / false / unknown, with the D-lagrangian on true."""

    def __init__(self, status: str, lagrangian: Optional[DSubspace] = None,
                 detail: str = "", report: Optional[WittReport] = None):
        self.status = status
        self.lagrangian = lagrangian
        self.detail = detail
        self.report = report

    def __repr__(self):
        return f"MetabolicOutcome({self.status}, {self.detail})"


def is_d_metabolic(q: QuadraticDSpace, budget: int = 300) -> MetabolicOutcome:
    if radical(q).dim != 0:
        raise Singular("metabolicity is defined for nonsingular forms")
    if q.space.n % 2 == 1:
        return MetabolicOutcome("false", detail="odd-dimension")
    report = witt_decompose(q, budget)
    if report.anisotropic_kernel.space.n == 0:
        L = span_D([p.v for p in report.planes], q.space)
        assert L.dim == q.space.n // 2
        Pf = perp(q, L)
        Lf = L.as_f_subspace()
        assert Pf.dim == Lf.dim
        for row in Lf.f_basis:
            assert Pf.contains(row)
        return MetabolicOutcome("true", lagrangian=L, report=report)
    if report.kernel_status.status == "anisotropic":
        return MetabolicOutcome(
            "false", detail=f"anisotropic-kernel({report.kernel_status.certificate})",
            report=report)
    return MetabolicOutcome("unknown", detail="kernel status unknown",
                            report=report)


# ------------------------------------------------------------- isometry

class IsometryOutcome:
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


def _square_class_equal(F, a: Scalar, b: Scalar) -> Optional[bool]:
    if a.is_zero() or b.is_zero():
        return None
    r = a / b
    if F.kind == "Q":
        return ratqf.rational_sqrt(r) is not None
    if F.kind == "F2t":
        num, den = r.v
        return gf2_is_square(num) and gf2_is_square(den)
    return None


def _assemble_from_lagrangian(q: QuadraticDSpace, q2: QuadraticDSpace,
                              L: DSubspace) -> Optional[DMatrix]:
    """L a lagrangian of q perp (-q2); when L is a graph over either
    factor, the projections assemble the isometry q -> q2."""
    n = q.space.n
    D = q.space.D
    xs = [[l.entries[i] for l in L.basis] for i in range(n)]
    ys = [[l.entries[n + i] for l in L.basis] for i in range(n)]
    X = DMatrix(D, xs)
    Y = DMatrix(D, ys)
    Xi = X.inverse()
    if Xi is not None:
        return Y * Xi
    Yi = Y.inverse()
    if Yi is not None:
        # graph over the second factor: X*Yi is an isometry q2 -> q
        g = X * Yi
        return g.inverse()
    return None


def d_isometry_test(q: QuadraticDSpace, q2: QuadraticDSpace,
                    budget: int = 300,
                    herm_bridge: bool = True) -> IsometryOutcome:
    if q.space.D != q2.space.D:
        raise AlgebraMismatch("forms over different algebras")
    if radical(q).dim != 0 or radical(q2).dim != 0:
        raise Singular("isometry test needs nonsingular forms")
    if q.space.n != q2.space.n:
        return IsometryOutcome("not_isometric", reason="dimension")
    F = q.space.F
    if F.kind == "Q":
        if ratqf.inertia(q.polar_matrix()) != ratqf.inertia(q2.polar_matrix()):
            return IsometryOutcome("not_isometric", reason="signature")
    d1 = flin.det(F, q.polar_matrix())
    d2 = flin.det(F, q2.polar_matrix())
    same = _square_class_equal(F, d1, d2)
    if same is False:
        return IsometryOutcome("not_isometric", reason="determinant")
    if (herm_bridge and q.provenance is not None and q2.provenance is not None
            and q.provenance.same_pi(q2.provenance)
            and q.provenance.pi.nontrivial_on_symd):
        # both forms remember their hermitian origin with one separating
        # pi, so the classification transfers verbatim in both directions
        from .hermitian import HermitianSpace, isometry_test
        p1, p2 = q.provenance, q2.provenance
        out = isometry_test(HermitianSpace(p1.sigma, p1.lam, p1.herm_gram),
                            HermitianSpace(p2.sigma, p2.lam, p2.herm_gram),
                            p1.pi, budget=budget)
        if out.status == "isometric" and _pullback_equal(q2, out.f, q):
            return IsometryOutcome("isometric", f=out.f)
        if out.status == "not_isometric":
            return IsometryOutcome(
                "not_isometric", reason=f"hermitian-{out.reason}")
    s = orth_sum(q, scale(-1, q2))
    mb = is_d_metabolic(s, budget)
    if mb.status == "true":
        f = _assemble_from_lagrangian(q, q2, mb.lagrangian)
        if f is not None and _pullback_equal(q2, f, q):
            return IsometryOutcome("isometric", f=f)
        # lagrangian exists but is skew to the factors; inconclusive
    if mb.status == "false":
        # q ~ q2 would force q perp (-q2) to be metabolic
        return IsometryOutcome("not_isometric", reason="witt-kernel")
    r1 = witt_decompose(q, budget)
    r2 = witt_decompose(q2, budget)
    if (r1.kernel_status.status == "anisotropic"
            and r2.kernel_status.status == "anisotropic"
            and r1.anisotropic_kernel.space.n != r2.anisotropic_kernel.space.n):
        return IsometryOutcome("not_isometric", reason="witt-kernel-dimension")
    return IsometryOutcome("unknown")


# ------------------------------------------------------------- cancellation

class CancellationReport:
    def __init__(self, q_outcome: MetabolicOutcome,
                 rho_outcome: MetabolicOutcome,
                 phi_outcome: MetabolicOutcome, consistent: bool):
        self.q_outcome = q_outcome
        self.rho_outcome = rho_outcome
        self.phi_outcome = phi_outcome
        self.consistent = consistent

    def __repr__(self):
        return (f"CancellationReport(q={self.q_outcome.status}, "
                f"rho={self.rho_outcome.status}, consistent={self.consistent})")


def cancellation_check(rho: QuadraticDSpace, phi: QuadraticDSpace,
                       budget: int = 300) -> CancellationReport:
    """Metabolicity of rho perp phi with phi metabolic must pass down
    to rho; the report carries all three verdicts and lagrangians."""
    phi_out = is_d_metabolic(phi, budget)
    if phi_out.status != "true":
        raise WittError("phi must be certified D-metabolic")
    q = orth_sum(rho, phi)
    if radical(q).dim != 0:
        raise Singular("rho perp phi must be nonsingular")
    q_out = is_d_metabolic(q, budget)
    rho_out = is_d_metabolic(rho, budget)
    consistent = not (q_out.status == "true" and rho_out.status == "false")
    return CancellationReport(q_out, rho_out, phi_out, consistent)
