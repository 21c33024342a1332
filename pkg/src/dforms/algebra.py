"""Quaternion algebras over exact fields, involutions of the first kind,
Sym/Symd subspaces, and linear functionals on them.

Characteristic 0 instances are (a,b): basis 1,i,j,k with i^2=a, j^2=b,
ij=k=-ji.  Characteristic 2 instances are [a,b): basis 1,u,v,w with
u^2+u=a, v^2=b, w=uv, vu=(u+1)v.  Multiplication is table-driven and the
table is checked associative on the whole basis at construction.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Optional, Sequence, Union

from . import flin
from .scalars import (
    F2T, QQ, FieldError, Field, Scalar, SimpleExtensionField,
    gf2_deg, gf2_divmod, gf2_factor, gf2_is_square, gf2_mul, gf2_poly_str,
    gf2_sqrt, irreducible_factor,
)
from . import ratqf


class AlgebraError(Exception):
    pass


class ZeroParameter(AlgebraError):
    pass


class ZeroInverse(AlgebraError, ZeroDivisionError):
    pass


class SplitAlgebraInverse(AlgebraError, ZeroDivisionError):
    """Inverting an element of reduced norm zero."""


class DimensionMismatch(AlgebraError):
    pass


class WrongCharacteristic(AlgebraError):
    pass


class LambdaMinusOne(AlgebraError):
    pass


class SplitAfterExtension(AlgebraError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"algebra splits after extension; zero divisor {witness}")


class InvolutionParameter(AlgebraError):
    pass


# ---------------------------------------------------------------- status

class CertifiedDivision:
    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail

    status = "certified_division"

    def __repr__(self):
        return f"CertifiedDivision({self.reason})"


class AssumedDivision:
    def __init__(self, budget: int):
        self.budget = budget

    status = "assumed_division"

    def __repr__(self):
        return f"AssumedDivision(budget={self.budget})"


class Split:
    def __init__(self, witness: Optional["Quat"]):
        self.witness = witness

    status = "split"

    def __repr__(self):
        return f"Split(witness={self.witness})"


# ---------------------------------------------------------------- elements

class Quat:
    """An element of a quaternion algebra: 4 coordinates over F."""

    __slots__ = ("A", "coords")

    def __init__(self, A: "QuaternionAlgebra", coords: Sequence[Scalar]):
        self.A = A
        self.coords = tuple(coords)

    def _coerce(self, other) -> Optional["Quat"]:
        if isinstance(other, Quat):
            if other.A != self.A:
                raise DimensionMismatch("elements of different algebras")
            return other
        if isinstance(other, (int, Scalar)):
            return self.A.from_scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quat(self.A, [x + y for x, y in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quat(self.A, [x - y for x, y in zip(self.coords, o.coords)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Quat(self.A, [-x for x in self.coords])

    def __mul__(self, other):
        if isinstance(other, Quat):
            if other.A != self.A:
                raise DimensionMismatch("elements of different algebras")
            return self.A._mul(self, other)
        if isinstance(other, (int, Scalar)):
            s = self.A.F.scalar(other)
            return Quat(self.A, [x * s for x in self.coords])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            s = self.A.F.scalar(other)
            return Quat(self.A, [s * x for x in self.coords])
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Quat):
            return NotImplemented
        return self.A == other.A and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __bool__(self):
        return not self.is_zero()

    def conj(self) -> "Quat":
        return self.A.gamma(self)

    def inv(self) -> "Quat":
        return inv(self)

    def __str__(self):
        names = self.A.basis_names
        parts = []
        for c, n in zip(self.coords, names):
            if c.is_zero():
                continue
            cs = str(c)
            parts.append(cs if n == "1" else (n if cs == "1" else f"({cs})*{n}"))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<quat {self}>"


class QuaternionAlgebra:
    """4-dimensional F-algebra with distinguished basis and verified table."""

    def __init__(self, F: Field, a: Scalar, b: Scalar, *, _budget: int = 24):
        self.F = F
        self.char = F.characteristic()
        self.a = F.scalar(a)
        self.b = F.scalar(b)
        if self.char == 0:
            if self.a.is_zero() or self.b.is_zero():
                raise ZeroParameter("char-0 parameters must be nonzero")
            self.basis_names = ("1", "i", "j", "k")
        else:
            if self.b.is_zero():
                raise ZeroParameter("char-2 parameter b must be nonzero")
            self.basis_names = ("1", "u", "v", "w")
        self._table = self._build_table()
        self._check_associative()
        self.division_status = certify_division(self, budget=_budget)
        self._spot_check_nrd()

    # sparse table: table[s][t] = list of (index, coefficient)
    def _build_table(self):
        F, a, b = self.F, self.a, self.b
        one = F.one
        T = [[None] * 4 for _ in range(4)]
        for t in range(4):
            T[0][t] = [(t, one)]
            T[t][0] = [(t, one)]
        if self.char == 0:
            T[1][1] = [(0, a)]
            T[1][2] = [(3, one)]
            T[1][3] = [(2, a)]
            T[2][1] = [(3, -one)]
            T[2][2] = [(0, b)]
            T[2][3] = [(1, -b)]
            T[3][1] = [(2, -a)]
            T[3][2] = [(1, b)]
            T[3][3] = [(0, -(a * b))]
        else:
            T[1][1] = [(0, a), (1, one)]
            T[1][2] = [(3, one)]
            T[1][3] = [(2, a), (3, one)]
            T[2][1] = [(2, one), (3, one)]
            T[2][2] = [(0, b)]
            T[2][3] = [(0, b), (1, b)]
            T[3][1] = [(2, a)]
            T[3][2] = [(1, b)]
            T[3][3] = [(0, a * b)]
        return T

    def _mul(self, x: Quat, y: Quat) -> Quat:
        F = self.F
        out = [F.zero, F.zero, F.zero, F.zero]
        for s in range(4):
            xs = x.coords[s]
            if xs.is_zero():
                continue
            for t in range(4):
                yt = y.coords[t]
                if yt.is_zero():
                    continue
                c = xs * yt
                for (m, coef) in self._table[s][t]:
                    out[m] = out[m] + c * coef
        return Quat(self, out)

    def _check_associative(self):
        basis = self.basis()
        for x in basis:
            for y in basis:
                xy = self._mul(x, y)
                for z in basis:
                    if self._mul(xy, z) != self._mul(x, self._mul(y, z)):
                        raise AlgebraError(
                            f"table not associative at ({x},{y},{z})")

    def _spot_check_nrd(self):
        rng = random.Random(20240)
        for _ in range(50):
            x = self.sample(rng, 3)
            y = self.sample(rng, 3)
            if nrd(x * y) != nrd(x) * nrd(y):
                raise AlgebraError("Nrd fails multiplicativity")

    # -- constructors
    def from_scalar(self, c) -> Quat:
        s = self.F.scalar(c)
        z = self.F.zero
        return Quat(self, (s, z, z, z))

    def element(self, coords: Sequence) -> Quat:
        cs = [self.F.scalar(c) for c in coords]
        if len(cs) != 4:
            raise DimensionMismatch("need 4 coordinates")
        return Quat(self, cs)

    def basis(self) -> list[Quat]:
        out = []
        for t in range(4):
            coords = [self.F.zero] * 4
            coords[t] = self.F.one
            out.append(Quat(self, coords))
        return out

    @property
    def zero(self) -> Quat:
        return self.from_scalar(0)

    @property
    def one(self) -> Quat:
        return self.from_scalar(1)

    def sample(self, rng, height: int) -> Quat:
        return Quat(self, [self.F.sample(rng, height) for _ in range(4)])

    # -- canonical involution and norm/trace
    def gamma(self, x: Quat) -> Quat:
        c = x.coords
        if self.char == 0:
            return Quat(self, (c[0], -c[1], -c[2], -c[3]))
        return Quat(self, (c[0] + c[1], c[1], c[2], c[3]))

    def trd(self, x: Quat) -> Scalar:
        if self.char == 0:
            return x.coords[0] + x.coords[0]
        return x.coords[1]

    def nrd(self, x: Quat) -> Scalar:
        x0, x1, x2, x3 = x.coords
        a, b = self.a, self.b
        if self.char == 0:
            return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3
        return (x0 * x0 + x0 * x1 + a * x1 * x1
                + b * (x2 * x2 + x2 * x3 + a * x3 * x3))

    def is_division_like(self) -> bool:
        return self.division_status.status != "split"

    def to_json(self) -> dict:
        return {"field": self.F.to_json(), "a": str(self.a), "b": str(self.b)}

    def __eq__(self, other):
        if not isinstance(other, QuaternionAlgebra):
            return NotImplemented
        return (self.F == other.F and self.a == other.a and self.b == other.b
                and self.char == other.char)

    def __hash__(self):
        return hash((self.F, self.a, self.b))

    def __repr__(self):
        if self.char == 0:
            return f"({self.a},{self.b}/{self.F!r})"
        return f"[{self.a},{self.b}/{self.F!r})"


def quat_create(F: Field, a, b, budget: int = 24) -> QuaternionAlgebra:
    return QuaternionAlgebra(F, F.scalar(a), F.scalar(b), _budget=budget)


# ---------------------------------------------------------------- ops

def mul(x: Quat, y: Quat) -> Quat:
    return x * y


def conj(x: Quat) -> Quat:
    return x.A.gamma(x)


def trd(x: Quat) -> Scalar:
    return x.A.trd(x)


def nrd(x: Quat) -> Scalar:
    return x.A.nrd(x)


def inv(x: Quat) -> Quat:
    if x.is_zero():
        raise ZeroInverse("inverse of 0")
    n = x.A.nrd(x)
    if n.is_zero():
        raise SplitAlgebraInverse(f"nrd({x}) = 0: zero divisor")
    ninv = n.inv()
    g = x.A.gamma(x)
    return Quat(x.A, [c * ninv for c in g.coords])


# ---------------------------------------------------------------- division

def _char2_residue_certificate(A: QuaternionAlgebra) -> Optional[tuple[int, str]]:
    """Search for an irreducible r with v_r(b) odd where  X^2+X+a  stays
    irreducible over the residue field; such r witnesses anisotropy of Nrd.
    """
    a, b = A.a.v, A.b.v
    places: dict[int, int] = {}
    for r, e in gf2_factor(b[0]).items():
        places[r] = places.get(r, 0) + e
    for r, e in gf2_factor(b[1]).items():
        places[r] = places.get(r, 0) - e
    for r, v in sorted(places.items()):
        if v % 2 == 0 or gf2_deg(r) > 14:
            continue
        an, ad = a
        if gf2_divmod(ad, r)[1] == 0:
            continue  # fraction is reduced, so r | denominator means v_r(a) < 0
        abar = _gf2_mod_div(an, ad, r)
        if abar is None:
            continue
        deg = gf2_deg(r)
        # Artin-Schreier: X^2+X+abar irreducible over F_2[t]/(r) iff
        # abar avoids {e^2 + e}
        image = set()
        for e in range(1 << deg):
            image.add(_gf2_mod_reduce(gf2_mul(e, e) ^ e, r))
        if abar not in image:
            return (r, gf2_poly_str(r))
    return None


def _gf2_mod_reduce(x: int, r: int) -> int:
    return gf2_divmod(x, r)[1]


def _gf2_mod_inv(x: int, r: int) -> Optional[int]:
    # extended euclid in GF(2)[t]
    if _gf2_mod_reduce(x, r) == 0:
        return None
    r0, r1 = r, _gf2_mod_reduce(x, r)
    s0, s1 = 0, 1
    while r1:
        q, rem = gf2_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 ^ gf2_mul(q, s1)
    if r0 != 1:
        return None
    return _gf2_mod_reduce(s0, r)


def _gf2_mod_div(num: int, den: int, r: int) -> Optional[int]:
    inv_d = _gf2_mod_inv(den, r)
    if inv_d is None:
        return None
    return _gf2_mod_reduce(gf2_mul(_gf2_mod_reduce(num, r), inv_d), r)


def _nrd_zero_sweep(A: QuaternionAlgebra, budget: int) -> Optional[Quat]:
    """Deterministic bounded search for a nonzero element of zero norm."""
    F = A.F
    # stage 1: full 4-tuples at tiny height
    cap = 6 if isinstance(F, SimpleExtensionField) else 15
    # islice: extension-field payload enumerations are huge, never materialize
    small = list(itertools.islice(
        F.enumerate_payloads(1 if A.char == 2 else 2), cap))
    svals = [Scalar(F, p) for p in small]
    for c0 in svals:
        for c1 in svals:
            for c2 in svals:
                for c3 in svals:
                    x = Quat(A, (c0, c1, c2, c3))
                    if not x.is_zero() and A.nrd(x).is_zero():
                        return x
    # stage 2: sparse supports at height <= budget
    cap2 = 40 if isinstance(F, SimpleExtensionField) else 300
    vals = [Scalar(F, p) for p in itertools.islice(
        F.enumerate_payloads(min(budget, 4)), cap2)]
    zero = F.zero
    for s in range(4):
        for t in range(s + 1, 4):
            for xs in vals:
                if xs.is_zero():
                    continue
                for xt in vals:
                    coords = [zero] * 4
                    coords[s], coords[t] = xs, xt
                    x = Quat(A, coords)
                    if A.nrd(x).is_zero():
                        return x
    # stage 3: seeded random dense samples
    rng = random.Random(1729)
    for _ in range(200 * budget):
        x = A.sample(rng, 3)
        if not x.is_zero() and A.nrd(x).is_zero():
            return x
    return None


def certify_division(A: QuaternionAlgebra, budget: int = 24):
    """Tri-state division certification: certificate, split witness, or assumed."""
    F, a, b = A.F, A.a, A.b
    if A.char == 0:
        if F == QQ:
            qa, qb = a.v, b.v
            if qa < 0 and qb < 0:
                return CertifiedDivision("definite",
                                         "Nrd is a positive definite rational form")
            places = ({-1, 2} | ratqf.rational_primes(qa)
                      | ratqf.rational_primes(qb))
            bad = [v for v in sorted(places) if ratqf.hilbert_symbol(qa, qb, v) == -1]
            if bad:
                return CertifiedDivision("hilbert", f"symbol -1 at place {bad[0]}")
            pt = ratqf.conic_point(qa, qb, 1, budget=max(budget, 64))
            if pt is not None:
                s, t = pt
                w = A.element([F.one, s, t, F.zero])
                assert A.nrd(w).is_zero() and not w.is_zero()
                return Split(w)
            return Split(None)  # split by the symbol computation; no small witness
        if isinstance(F, SimpleExtensionField) and F.base == QQ:
            ca, cb = a.v, b.v
            if (all(QQ._is_zero(c) for c in ca[1:])
                    and all(QQ._is_zero(c) for c in cb[1:])
                    and ca[0] < 0 and cb[0] < 0
                    and ratqf.real_root_exists(list(F.minpoly))):
                return CertifiedDivision(
                    "real-embedding",
                    "params are negative rationals; minimal polynomial has a real root")
            w = _nrd_zero_sweep(A, budget)
            if w is not None:
                return Split(w)
            return AssumedDivision(budget)
        w = _nrd_zero_sweep(A, budget)
        if w is not None:
            return Split(w)
        return AssumedDivision(budget)
    # characteristic 2
    if F == F2T:
        # cheap complete split detections first
        fac = irreducible_factor(F, [a, F.one, F.one])  # X^2 + X + a
        if fac is not None and len(fac) == 2:
            s = fac[0]  # root of X^2+X+a
            w = A.element([s, F.one, F.zero, F.zero])  # u + s, (u+s)^2=(u+s)
            assert A.nrd(w).is_zero()
            return Split(w)
        bn, bd = b.v
        if gf2_is_square(bn) and gf2_is_square(bd):
            c = Scalar(F, (gf2_sqrt(bn), gf2_sqrt(bd)))
            w = A.element([c, F.zero, F.one, F.zero])  # v + sqrt(b)
            assert A.nrd(w).is_zero()
            return Split(w)
        cert = _char2_residue_certificate(A)
        if cert is not None:
            r, rstr = cert
            return CertifiedDivision("valuation", f"odd place {rstr} of b; "
                                     "residue Artin-Schreier class nontrivial")
    w = _nrd_zero_sweep(A, budget)
    if w is not None:
        return Split(w)
    return AssumedDivision(budget)


# ---------------------------------------------------------------- involutions

class Involution:
    """An involution of the first kind on a quaternion algebra."""

    def __init__(self, A: QuaternionAlgebra, kind: str, s: Optional[Quat] = None):
        self.A = A
        self.kind = kind  # "canonical" | "int_s"
        self.s = s
        if kind == "int_s":
            if A.char != 0:
                raise WrongCharacteristic("twisted involutions only in char 0")
            if s is None or s.is_zero():
                raise InvolutionParameter("s must be a unit")
            if A.nrd(s).is_zero():
                raise InvolutionParameter("s must be invertible")
            if A.gamma(s) != -s:
                raise InvolutionParameter("need gamma(s) = -s")
            self._s_inv = inv(s)
        elif kind != "canonical":
            raise InvolutionParameter(f"unknown involution kind {kind!r}")
        self.matrix = self._action_matrix()
        self._verify()

    def apply(self, x: Quat) -> Quat:
        A = self.A
        if self.kind == "canonical":
            return A.gamma(x)
        return self.s * A.gamma(x) * self._s_inv

    def __call__(self, x: Quat) -> Quat:
        return self.apply(x)

    def _action_matrix(self) -> list[list[Scalar]]:
        cols = [self.apply(e).coords for e in self.A.basis()]
        return [[cols[t][m] for t in range(4)] for m in range(4)]

    def _verify(self):
        A = self.A
        basis = A.basis()
        for x in basis:
            if self.apply(self.apply(x)) != x:
                raise InvolutionParameter("sigma^2 != id")
        if self.apply(A.one) != A.one:
            raise InvolutionParameter("sigma does not fix F")
        for x in basis:
            for y in basis:
                if self.apply(x * y) != self.apply(y) * self.apply(x):
                    raise InvolutionParameter("sigma is not an antiautomorphism")

    def to_json(self) -> dict:
        if self.kind == "canonical":
            return {"kind": "canonical"}
        return {"kind": "int_s", "s": [str(c) for c in self.s.coords]}

    def __eq__(self, other):
        if not isinstance(other, Involution):
            return NotImplemented
        return self.A == other.A and self.kind == other.kind and self.s == other.s

    def __repr__(self):
        if self.kind == "canonical":
            return "gamma"
        return f"Int({self.s})∘gamma"


def involution_canonical(A: QuaternionAlgebra) -> Involution:
    return Involution(A, "canonical")


def involution_int(A: QuaternionAlgebra, s: Quat) -> Involution:
    return Involution(A, "int_s", s)


# ---------------------------------------------------------------- sym spaces

class SymSpaces:
    """Bases of Sym_lambda = {x : sigma(x) = lam x} and
    Symd_lambda = {x + lam sigma(x)}."""

    def __init__(self, A: QuaternionAlgebra, sigma: Involution, lam: int):
        if lam not in (1, -1):
            raise ValueError("lambda must be +1 or -1")
        self.A = A
        self.sigma = sigma
        self.lam = lam
        F = A.F
        lam_s = F.scalar(lam)
        M = sigma.matrix
        # sigma(x) - lam x = 0
        sys_rows = [[M[m][t] - (lam_s if m == t else F.zero) for t in range(4)]
                    for m in range(4)]
        self.sym_basis = [Quat(A, v) for v in flin.kernel_basis(F, sys_rows)]
        # image of x -> x + lam sigma(x)
        img_cols = [[(F.one if m == t else F.zero) + lam_s * M[m][t]
                     for t in range(4)] for m in range(4)]
        self.symd_basis = [Quat(A, v) for v in flin.column_space_basis(img_cols)]
        self._sym_mat = [list(q.coords) for q in self.sym_basis]

    def contains(self, x: Quat) -> bool:
        return self.coordinates(x) is not None

    def coordinates(self, x: Quat) -> Optional[list[Scalar]]:
        return flin.in_span(self.A.F, self._sym_mat, list(x.coords))

    def symd_contains(self, x: Quat) -> bool:
        mat = [list(q.coords) for q in self.symd_basis]
        return flin.in_span(self.A.F, mat, list(x.coords)) is not None

    def __repr__(self):
        return (f"SymSpaces(lam={self.lam}, dim_sym={len(self.sym_basis)}, "
                f"dim_symd={len(self.symd_basis)})")


def sym_spaces(A: QuaternionAlgebra, sigma: Involution, lam: int) -> SymSpaces:
    return SymSpaces(A, sigma, lam)


# ---------------------------------------------------------------- pi

class PiFunctional:
    """F-linear functional on Sym_lambda, stored by values on sym_basis."""

    def __init__(self, spaces: SymSpaces, coefficients: Sequence):
        F = spaces.A.F
        coeffs = [F.scalar(c) for c in coefficients]
        if len(coeffs) != len(spaces.sym_basis):
            raise DimensionMismatch(
                f"need {len(spaces.sym_basis)} coefficients, got {len(coeffs)}")
        self.spaces = spaces
        self.coefficients = coeffs
        self.nontrivial_on_symd = any(
            not self(x).is_zero() for x in spaces.symd_basis)
        self.symmetric = self._check_symmetric()

    def __call__(self, x: Quat) -> Scalar:
        coords = self.spaces.coordinates(x)
        if coords is None:
            raise DimensionMismatch(f"{x} is not in Sym_lambda")
        F = self.spaces.A.F
        acc = F.zero
        for c, v in zip(coords, self.coefficients):
            acc = acc + c * v
        return acc

    def _check_symmetric(self) -> bool:
        A = self.spaces.A
        sig = self.spaces.sigma
        lam = self.spaces.lam
        basis = A.basis()
        for x in basis:
            for y in basis:
                xy, yx = x * y, y * x
                lhs = xy + lam * sig(xy)
                rhs = yx + lam * sig(yx)
                if self(lhs) != self(rhs):
                    return False
        return True

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coefficients]

    def __repr__(self):
        flags = []
        if self.nontrivial_on_symd:
            flags.append("nontrivial_on_symd")
        if self.symmetric:
            flags.append("symmetric")
        return f"pi({', '.join(str(c) for c in self.coefficients)}; {'/'.join(flags)})"


def pi_create(spaces: SymSpaces, coefficients: Sequence) -> PiFunctional:
    return PiFunctional(spaces, coefficients)


class NotTraceLike:
    """Witness pair (x, y) with l(xy) != l(yx)."""

    def __init__(self, x: Quat, y: Quat):
        self.witness = (x, y)

    def __repr__(self):
        return f"NotTraceLike(witness=({self.witness[0]}, {self.witness[1]}))"


class NotSymmetric:
    def __init__(self, witness):
        self.witness = witness

    def __repr__(self):
        return f"NotSymmetric(witness={self.witness})"


def trace_multiple_recover(A: QuaternionAlgebra,
                           values: Sequence) -> Union[Scalar, NotTraceLike]:
    """For l given by values on the basis: the alpha with l = alpha*Trd, or
    a basis pair witnessing l(xy) != l(yx)."""
    F = A.F
    vals = [F.scalar(v) for v in values]
    if len(vals) != 4:
        raise DimensionMismatch("need one value per basis element")

    def l(x: Quat) -> Scalar:
        acc = F.zero
        for c, v in zip(x.coords, vals):
            acc = acc + c * v
        return acc

    basis = A.basis()
    for x in basis:
        for y in basis:
            if l(x * y) != l(y * x):
                return NotTraceLike(x, y)
    if A.char == 0:
        alpha = vals[0] / F.scalar(2)
    else:
        alpha = vals[1]  # Trd(u) = 1
    for e in basis:
        assert l(e) == alpha * A.trd(e), "commutator sweep should force this"
    return alpha


def pi_symmetric_decompose(pi: PiFunctional) -> Union[Scalar, NotSymmetric]:
    """alpha with pi = alpha*Trd on Sym_+1, via the halved symmetrization."""
    spaces = pi.spaces
    A = spaces.A
    if A.char == 2:
        raise WrongCharacteristic("decomposition divides by 2")
    if spaces.lam != 1:
        raise LambdaMinusOne("only lambda = +1 admits nontrivial symmetric pi")
    F = A.F
    half = F.scalar(2).inv()
    lam = spaces.lam
    values = []
    for e in A.basis():
        values.append(half * pi(e + lam * spaces.sigma(e)))
    res = trace_multiple_recover(A, values)
    if isinstance(res, NotTraceLike):
        return NotSymmetric(res.witness)
    return res


def involution_extend(sigma: Involution, K: Field) -> Involution:
    """The same involution on the algebra with scalars extended to K;
    rejects extensions that split the algebra."""
    A = sigma.A
    F = A.F
    if not isinstance(K, SimpleExtensionField) or K.base != F:
        raise FieldError(f"{K!r} is not a simple extension of {F!r}")
    AK = quat_create(K, K.embed(A.a), K.embed(A.b))
    if AK.division_status.status == "split":
        raise SplitAfterExtension(AK.division_status.witness)
    if sigma.kind == "canonical":
        return involution_canonical(AK)
    return involution_int(AK, AK.element([K.embed(c) for c in sigma.s.coords]))


def pi_extend(pi: PiFunctional, K: Field) -> PiFunctional:
    """Extend pi K-linearly to the algebra over an extension field K."""
    spaces = pi.spaces
    A = spaces.A
    F = A.F

    def emb(x: Scalar) -> Scalar:
        return K.embed(x)

    sigK = involution_extend(spaces.sigma, K)
    AK = sigK.A
    spacesK = sym_spaces(AK, sigK, spaces.lam)
    # a coordinate functional on D agreeing with pi on Sym
    rows = [list(q.coords) for q in spaces.sym_basis]
    c = flin.solve(F, rows, pi.coefficients)
    assert c is not None
    cK = [emb(x) for x in c]
    coeffs = []
    for q in spacesK.sym_basis:
        acc = K.zero
        for t in range(4):
            acc = acc + q.coords[t] * cK[t]
        coeffs.append(acc)
    return PiFunctional(spacesK, coeffs)
