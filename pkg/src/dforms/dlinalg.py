"""Right D-vector spaces and their exact linear algebra.

A RightDSpace is D^n with the right action held coordinatewise.  The
induced F-structure has dimension 4n with the F-basis ordered
basis-major, algebra-basis-minor: F-index 4s+t corresponds to e_s * d_t.

Echelon forms over D scale rows by inverses applied on the module side
(row * pivot^{-1}), the only normalization preserving right spans; all
eliminations are exact.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence

from . import flin
from .algebra import Quat, QuaternionAlgebra, inv
from .scalars import Scalar


class SpaceMismatch(Exception):
    pass


class RightDSpace:
    def __init__(self, D: QuaternionAlgebra, n: int):
        if n < 0:
            raise ValueError("dimension must be >= 0")
        self.D = D
        self.n = n
        self.F = D.F

    @property
    def dim_F(self) -> int:
        return 4 * self.n

    def vector(self, entries: Sequence) -> "DVector":
        es = []
        for e in entries:
            if isinstance(e, Quat):
                if e.A != self.D:
                    raise SpaceMismatch("entry from a different algebra")
                es.append(e)
            else:
                es.append(self.D.element(e))
        if len(es) != self.n:
            raise SpaceMismatch(f"need {self.n} entries")
        return DVector(self, es)

    def zero_vector(self) -> "DVector":
        return DVector(self, [self.D.zero] * self.n)

    def basis_vector(self, s: int) -> "DVector":
        entries = [self.D.zero] * self.n
        entries[s] = self.D.one
        return DVector(self, entries)

    def d_basis(self) -> list["DVector"]:
        return [self.basis_vector(s) for s in range(self.n)]

    def f_basis(self) -> list["DVector"]:
        """The induced F-basis e_s * d_t in the fixed order."""
        out = []
        for s in range(self.n):
            for d in self.D.basis():
                entries = [self.D.zero] * self.n
                entries[s] = d
                out.append(DVector(self, entries))
        return out

    def from_f_coords(self, coords: Sequence[Scalar]) -> "DVector":
        if len(coords) != self.dim_F:
            raise SpaceMismatch(f"need {self.dim_F} F-coordinates")
        entries = []
        for s in range(self.n):
            entries.append(Quat(self.D, coords[4 * s: 4 * s + 4]))
        return DVector(self, entries)

    def sample(self, rng: random.Random, height: int) -> "DVector":
        return DVector(self, [self.D.sample(rng, height) for _ in range(self.n)])

    def __eq__(self, other):
        if not isinstance(other, RightDSpace):
            return NotImplemented
        return self.D == other.D and self.n == other.n

    def __repr__(self):
        return f"D^{self.n} over {self.D!r}"


class DVector:
    __slots__ = ("space", "entries")

    def __init__(self, space: RightDSpace, entries: Sequence[Quat]):
        self.space = space
        self.entries = tuple(entries)

    def __add__(self, other: "DVector") -> "DVector":
        if self.space != other.space:
            raise SpaceMismatch("vectors from different spaces")
        return DVector(self.space, [x + y for x, y in zip(self.entries, other.entries)])

    def __sub__(self, other: "DVector") -> "DVector":
        if self.space != other.space:
            raise SpaceMismatch("vectors from different spaces")
        return DVector(self.space, [x - y for x, y in zip(self.entries, other.entries)])

    def __neg__(self):
        return DVector(self.space, [-x for x in self.entries])

    def __mul__(self, d) -> "DVector":
        """Right action v * d."""
        if isinstance(d, Quat):
            return DVector(self.space, [x * d for x in self.entries])
        if isinstance(d, (int, Scalar)):
            s = self.space.F.scalar(d)
            return DVector(self.space, [x * s for x in self.entries])
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, DVector):
            return NotImplemented
        return self.space == other.space and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __bool__(self):
        return not self.is_zero()

    def f_coords(self) -> list[Scalar]:
        out = []
        for e in self.entries:
            out.extend(e.coords)
        return out

    def support(self) -> list[int]:
        return [s for s, e in enumerate(self.entries) if not e.is_zero()]

    def to_json(self) -> list[list[str]]:
        return [[str(c) for c in e.coords] for e in self.entries]

    def __repr__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def vector_from_json(space: RightDSpace, data: Sequence[Sequence[str]]) -> DVector:
    return space.vector([[space.F.parse(c) for c in entry] for entry in data])


# ---------------------------------------------------------------- D-echelon

def _d_rref(vectors: list[DVector]) -> list[DVector]:
    """Reduced echelon basis of the right span of the given vectors.

    Row operations: row <- row * c and row <- row + other * c keep the
    right span; pivots normalized to 1 by multiplying with inv(pivot) on
    the module side.
    """
    rows = [v for v in vectors if not v.is_zero()]
    if not rows:
        return []
    space = rows[0].space
    n = space.n
    out: list[DVector] = []
    pivots: list[int] = []
    work = list(rows)
    col = 0
    while col < n and work:
        pidx = None
        for i, r in enumerate(work):
            if not r.entries[col].is_zero():
                pidx = i
                break
        if pidx is None:
            col += 1
            continue
        piv_row = work.pop(pidx)
        piv_row = piv_row * inv(piv_row.entries[col])
        for i, r in enumerate(work):
            c = r.entries[col]
            if not c.is_zero():
                work[i] = r - piv_row * c
        for i, r in enumerate(out):
            c = r.entries[col]
            if not c.is_zero():
                out[i] = r - piv_row * c
        out.append(piv_row)
        pivots.append(col)
        work = [r for r in work if not r.is_zero()]
        col += 1
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order]


class DSubspace:
    """A right D-subspace held by its reduced echelon D-basis."""

    def __init__(self, space: RightDSpace, basis: list[DVector]):
        self.space = space
        self.basis = basis  # already reduced

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def dim_F(self) -> int:
        return 4 * len(self.basis)

    def coordinates(self, v: DVector) -> Optional[list[Quat]]:
        """Right coefficients c with sum basis_i * c_i = v, or None."""
        if v.space != self.space:
            raise SpaceMismatch("vector from a different space")
        rem = v
        coeffs = []
        for b in self.basis:
            pcol = next(i for i, e in enumerate(b.entries) if not e.is_zero())
            c = rem.entries[pcol]
            coeffs.append(c)
            if not c.is_zero():
                rem = rem - b * c
        return coeffs if rem.is_zero() else None

    def contains(self, v: DVector) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: "DSubspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def as_f_subspace(self) -> "FSubspace":
        vecs = []
        for b in self.basis:
            for d in self.space.D.basis():
                vecs.append((b * d).f_coords())
        return FSubspace(self.space, vecs)

    def __eq__(self, other):
        if not isinstance(other, DSubspace):
            return NotImplemented
        return self.space == other.space and self.basis == other.basis

    def __repr__(self):
        return f"DSubspace(dim={self.dim} of {self.space!r})"


def span_D(vectors: Iterable[DVector], space: Optional[RightDSpace] = None) -> DSubspace:
    vectors = list(vectors)
    if space is None:
        if not vectors:
            raise SpaceMismatch("empty span needs an explicit space")
        space = vectors[0].space
    for v in vectors:
        if v.space != space:
            raise SpaceMismatch("vectors from different spaces")
    return DSubspace(space, _d_rref(vectors))


class FSubspace:
    """An F-subspace of the induced 4n-dimensional F-space."""

    def __init__(self, space: RightDSpace, f_vectors: Sequence[Sequence[Scalar]]):
        self.space = space
        F = space.F
        rows = [list(v) for v in f_vectors]
        for r in rows:
            if len(r) != space.dim_F:
                raise SpaceMismatch("bad F-vector length")
        self.f_basis = flin.row_space_basis(rows) if rows else []

    @property
    def dim(self) -> int:
        return len(self.f_basis)

    def contains(self, coords: Sequence[Scalar]) -> bool:
        return flin.in_span(self.space.F, self.f_basis, list(coords)) is not None

    def contains_vector(self, v: DVector) -> bool:
        return self.contains(v.f_coords())

    def d_stable_witness(self) -> Optional[tuple[DVector, Quat]]:
        """None when S*d stays in S for all basis d; else an escaping pair."""
        for row in self.f_basis:
            v = self.space.from_f_coords(row)
            for d in self.space.D.basis():
                if not self.contains((v * d).f_coords()):
                    return (v, d)
        return None

    def is_d_stable(self) -> bool:
        return self.d_stable_witness() is None

    def to_d_subspace(self) -> DSubspace:
        """Lift a D-stable F-subspace to the D-subspace it spans."""
        w = self.d_stable_witness()
        if w is not None:
            raise SpaceMismatch(f"not D-stable: witness {w}")
        assert self.dim % 4 == 0
        vecs = [self.space.from_f_coords(r) for r in self.f_basis]
        sub = span_D(vecs, self.space)
        assert sub.dim_F == self.dim
        return sub

    def intersect(self, other: "FSubspace") -> "FSubspace":
        if self.space != other.space:
            raise SpaceMismatch("subspaces of different spaces")
        F = self.space.F
        p, q = len(self.f_basis), len(other.f_basis)
        if p == 0 or q == 0:
            return FSubspace(self.space, [])
        # alpha^T A = beta^T B: kernel of the stacked transposed system
        rows = []
        for c in range(self.space.dim_F):
            rows.append([self.f_basis[i][c] for i in range(p)]
                        + [-other.f_basis[j][c] for j in range(q)])
        sols = flin.kernel_basis(F, rows)
        vecs = []
        for sol in sols:
            acc = [F.zero] * self.space.dim_F
            for i in range(p):
                if not sol[i].is_zero():
                    acc = [acc[c] + sol[i] * self.f_basis[i][c]
                           for c in range(self.space.dim_F)]
            vecs.append(acc)
        return FSubspace(self.space, vecs)

    def sum(self, other: "FSubspace") -> "FSubspace":
        if self.space != other.space:
            raise SpaceMismatch("subspaces of different spaces")
        return FSubspace(self.space, list(self.f_basis) + list(other.f_basis))

    def __eq__(self, other):
        if not isinstance(other, FSubspace):
            return NotImplemented
        return self.space == other.space and self.f_basis == other.f_basis

    def __repr__(self):
        return f"FSubspace(dim={self.dim} of {self.space!r})"


# ---------------------------------------------------------------- set ops

def intersect(S1: DSubspace, S2: DSubspace) -> DSubspace:
    """Intersection of D-subspaces (via the F-structure, lifted back)."""
    if S1.space != S2.space:
        raise SpaceMismatch("subspaces of different spaces")
    inter = S1.as_f_subspace().intersect(S2.as_f_subspace())
    assert inter.dim % 4 == 0, "intersection of D-stable spaces is D-stable"
    if inter.dim == 0:
        return DSubspace(S1.space, [])
    return inter.to_d_subspace()


def subspace_sum(S1: DSubspace, S2: DSubspace) -> DSubspace:
    if S1.space != S2.space:
        raise SpaceMismatch("subspaces of different spaces")
    return span_D(list(S1.basis) + list(S2.basis), S1.space)


def quotient_dim(S1: DSubspace, S2: DSubspace) -> int:
    """dim_D of S1 / (S1 ∩ S2)."""
    return S1.dim - intersect(S1, S2).dim


# ---------------------------------------------------------------- matrices

class DMatrix:
    """n x m matrix over D acting on the left of right-coordinate vectors,
    so the action is right-D-linear: (Mv)·d = M(v·d)."""

    def __init__(self, D: QuaternionAlgebra, rows: Sequence[Sequence[Quat]]):
        self.D = D
        self.rows = [list(r) for r in rows]
        self.n = len(self.rows)
        self.m = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.m:
                raise SpaceMismatch("ragged matrix")
            for e in r:
                if e.A != D:
                    raise SpaceMismatch("entry from a different algebra")

    @classmethod
    def identity(cls, D: QuaternionAlgebra, n: int) -> "DMatrix":
        return cls(D, [[D.one if i == j else D.zero for j in range(n)]
                       for i in range(n)])

    def apply(self, v: DVector) -> DVector:
        if v.space.D != self.D or v.space.n != self.m:
            raise SpaceMismatch("shape mismatch")
        target = RightDSpace(self.D, self.n)
        out = []
        for i in range(self.n):
            acc = self.D.zero
            for j in range(self.m):
                acc = acc + self.rows[i][j] * v.entries[j]
            out.append(acc)
        return DVector(target, out)

    def __mul__(self, other: "DMatrix") -> "DMatrix":
        if not isinstance(other, DMatrix):
            return NotImplemented
        if self.m != other.n or self.D != other.D:
            raise SpaceMismatch("shape mismatch")
        rows = []
        for i in range(self.n):
            row = []
            for j in range(other.m):
                acc = self.D.zero
                for l in range(self.m):
                    acc = acc + self.rows[i][l] * other.rows[l][j]
                row.append(acc)
            rows.append(row)
        return DMatrix(self.D, rows)

    def transpose_apply(self, sigma) -> "DMatrix":
        """sigma applied entrywise to the transpose."""
        return DMatrix(self.D, [[sigma(self.rows[j][i]) for j in range(self.n)]
                                for i in range(self.m)])

    def is_invertible(self) -> bool:
        return self.inverse() is not None

    def inverse(self) -> Optional["DMatrix"]:
        """Two-sided inverse via echelon with left row operations."""
        if self.n != self.m:
            return None
        D = self.D
        n = self.n
        aug = [[self.rows[i][j] for j in range(n)]
               + [D.one if i == j else D.zero for j in range(n)]
               for i in range(n)]
        r = 0
        for c in range(n):
            piv = None
            for i in range(r, n):
                if not aug[i][c].is_zero() and not D.nrd(aug[i][c]).is_zero():
                    piv = i
                    break
            if piv is None:
                return None
            aug[r], aug[piv] = aug[piv], aug[r]
            pinv = inv(aug[r][c])
            aug[r] = [pinv * x for x in aug[r]]
            for i in range(n):
                if i != r and not aug[i][c].is_zero():
                    f = aug[i][c]
                    aug[i] = [aug[i][j] - f * aug[r][j] for j in range(2 * n)]
            r += 1
        if r < n:
            return None
        return DMatrix(D, [row[n:] for row in aug])

    def __eq__(self, other):
        if not isinstance(other, DMatrix):
            return NotImplemented
        return self.D == other.D and self.rows == other.rows

    def __repr__(self):
        return f"DMatrix({self.n}x{self.m} over {self.D!r})"


# ------------------------------------------------------------ enumeration

def _weight(F, s: Scalar) -> int:
    return 0 if s.is_zero() else F.height(s)


def _scalar_stratum(F, w: int) -> list[Scalar]:
    """All scalars of weight exactly w (weight 0 = zero plus height-0 units)."""
    return [s for s in F.enumerate(w) if _weight(F, s) == w]


def _coord_tuples(F, strata: list[list[Scalar]], k: int, w: int):
    """k-tuples of scalars with total weight exactly w, lexicographic in
    the stratified order."""
    if k == 0:
        if w == 0:
            yield ()
        return
    for w0 in range(w + 1):
        for s in strata[w0]:
            for rest in _coord_tuples(F, strata, k - 1, w - w0):
                yield (s,) + rest


def d_element_candidates(D: QuaternionAlgebra):
    """Deterministic enumeration of nonzero algebra elements in increasing
    total coordinate weight.  Complete in the limit."""
    F = D.F
    strata: list[list[Scalar]] = []
    w = 0
    while True:
        strata.append(_scalar_stratum(F, w))
        for tail in _coord_tuples(F, strata, 4, w):
            x = D.element(list(tail))
            if not x.is_zero():
                yield x
        w += 1


def d_dense_candidates(space: RightDSpace):
    """All nonzero vectors by total F-coordinate weight, without pivot
    normalization.  Catches witnesses like (d, 1) whose projective
    normal form has tall denominator coordinates."""
    F = space.F
    strata: list[list[Scalar]] = []
    w = 0
    while True:
        strata.append(_scalar_stratum(F, w))
        for tail in _coord_tuples(F, strata, space.dim_F, w):
            v = space.from_f_coords(list(tail))
            if not v.is_zero():
                yield v
        w += 1


def d_vector_candidates(space: RightDSpace):
    """Deterministic projective enumeration of nonzero vectors: the first
    nonzero coordinate is 1, later coordinates sweep quaternions in
    increasing total coordinate weight.  Complete in the limit: every
    right line vD over a division algebra contains exactly one such
    normal form."""
    D = space.D
    F = D.F
    n = space.n
    if n == 0:
        return
    if n == 1:
        yield space.basis_vector(0)
        return
    strata: list[list[Scalar]] = []
    w = 0
    while True:
        strata.append(_scalar_stratum(F, w))
        for pivot in range(n):
            k = 4 * (n - pivot - 1)
            for tail in _coord_tuples(F, strata, k, w):
                entries = [D.zero] * pivot + [D.one]
                for s in range(n - pivot - 1):
                    entries.append(D.element(list(tail[4 * s: 4 * s + 4])))
                yield space.vector(entries)
        w += 1
