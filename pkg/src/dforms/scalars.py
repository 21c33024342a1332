"""Exact scalar arithmetic over the base fields used by this package.

Three kinds of field are supported:

* ``QQ`` -- the rational numbers, with elements kept as reduced fractions
  (backed by ``gmpy2.mpq``);
* ``F2T`` -- the rational function field over GF(2) in one variable ``t``.
  Polynomials over GF(2) are stored as Python ints (bit ``i`` is the
  coefficient of ``t^i``), elements are reduced fractions of such
  polynomials with the unique monic denominator;
* simple extensions ``F[x]/(f)`` of either of the above, with ``f`` monic
  and irreducible of degree at most 5.  Elements are coordinate tuples with
  respect to the power basis.

Every element has a unique canonical representation, so equality is plain
structural equality and there is no floating point anywhere.  Irreducibility
of extension polynomials is *decided* (not assumed) for degree <= 5 by a
rational-root search plus a quadratic-factor sweep; both are complete over
the two supported base fields because their rings of integers (Z and
GF(2)[t]) are unique factorization domains with enumerable divisors.
"""

from __future__ import annotations

import itertools
from math import gcd, isqrt
from typing import Iterator, Optional, Sequence

from gmpy2 import mpq, mpz


class FieldError(Exception):
    """Base class for scalar-level errors."""


class FieldMismatch(FieldError):
    """Raised when combining scalars from different fields."""


class DivisionByZero(FieldError, ZeroDivisionError):
    """Division or inversion of the zero scalar."""


class ParseError(FieldError, ValueError):
    """A scalar or polynomial string did not match the expected grammar."""


class Reducible(FieldError):
    """A would-be minimal polynomial has a proper factor.

    The offending factor (as a tuple of base-field scalars, ascending
    degree, monic) is stored in ``factor``.
    """

    def __init__(self, poly, factor):
        self.poly = poly
        self.factor = factor
        super().__init__(f"polynomial {poly} is reducible; factor {factor}")


class DegreeUnsupported(FieldError):
    """Extension degree outside the supported (decidable) range."""


class UnsupportedBase(FieldError):
    """Simple extensions are only built over QQ or F2T."""


# ----------------------------------------------------------------------
# GF(2)[t] polynomials as ints, bit i <-> coefficient of t^i.

def gf2_deg(a: int) -> int:
    """Degree of a GF(2) polynomial; deg(0) = -1."""
    return a.bit_length() - 1


def gf2_mul(a: int, b: int) -> int:
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
    return res


def gf2_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise DivisionByZero("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_divmod(a, b)[1]
    return a


def gf2_pow(a: int, e: int) -> int:
    res = 1
    while e:
        if e & 1:
            res = gf2_mul(res, a)
        a = gf2_mul(a, a)
        e >>= 1
    return res


def gf2_is_square(a: int) -> bool:
    """In GF(2)[t] squares are exactly the polynomials in t^2."""
    return a & 0xAAAAAAAAAAAAAAAA == 0 if a.bit_length() <= 64 else _gf2_is_square_big(a)


def _gf2_is_square_big(a: int) -> bool:
    i = 1
    while (1 << i) <= a:
        if a >> i & 1:
            return False
        i += 2
    return True


def gf2_sqrt(a: int) -> int:
    """Square root of a square polynomial (compress even-index bits)."""
    res = 0
    i = 0
    while (1 << 2 * i) <= a:
        if a >> (2 * i) & 1:
            res |= 1 << i
        i += 1
    return res


def gf2_factor(a: int) -> dict[int, int]:
    """Factor a nonzero GF(2) polynomial into irreducibles by trial division."""
    factors: dict[int, int] = {}
    p = 2  # the polynomial t
    while gf2_deg(a) > 0:
        if gf2_deg(p) * 2 > gf2_deg(a):
            factors[a] = factors.get(a, 0) + 1
            break
        q, r = gf2_divmod(a, p)
        if r == 0:
            factors[p] = factors.get(p, 0) + 1
            a = q
        else:
            p += 1
    return factors


def gf2_divisors(a: int) -> list[int]:
    """All monic divisors of a nonzero GF(2) polynomial."""
    divs = [1]
    for p, e in gf2_factor(a).items():
        divs = [gf2_mul(d, gf2_pow(p, k)) for d in divs for k in range(e + 1)]
    return sorted(set(divs))


def gf2_poly_str(a: int) -> str:
    if a == 0:
        return "0"
    terms = []
    for e in range(gf2_deg(a), -1, -1):
        if a >> e & 1:
            terms.append("1" if e == 0 else ("t" if e == 1 else f"t^{e}"))
    return "+".join(terms)


def gf2_poly_parse(s: str) -> int:
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    res = 0
    for term in s.split("+"):
        term = term.strip()
        if term == "0":
            continue
        if term == "1":
            res ^= 1
        elif term == "t":
            res ^= 2
        elif term.startswith("t^"):
            res ^= 1 << int(term[2:])
        else:
            raise ParseError(f"bad GF(2)[t] term {term!r}")
    return res


# ----------------------------------------------------------------------
# Fields and scalars.

class Scalar:
    """An exact field element: a field reference plus a canonical payload."""

    __slots__ = ("field", "v")

    def __init__(self, field: "Field", v):
        self.field = field
        self.v = v

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            return other
        if isinstance(other, (int, mpz)):
            return self.field.scalar(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field._add(self.v, o.v))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field._sub(self.v, o.v))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field._sub(o.v, self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field._mul(self.v, o.v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field._mul(self.v, self.field._inv(o.v)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.field._mul(o.v, self.field._inv(self.v)))

    def __neg__(self):
        return Scalar(self.field, self.field._neg(self.v))

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        res = self.field.one
        base = self
        while e:
            if e & 1:
                res = res * base
            base = base * base
            e >>= 1
        return res

    def inv(self) -> "Scalar":
        return Scalar(self.field, self.field._inv(self.v))

    def is_zero(self) -> bool:
        return self.field._is_zero(self.v)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.v == other.v
        if isinstance(other, (int, mpz)):
            return self.v == self.field.scalar(int(other)).v
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.v))

    def __str__(self):
        return self.field.render(self.v)

    def __repr__(self):
        return f"<{self.field.kind} {self}>"


class Field:
    """Abstract base: payload-level arithmetic plus canonical forms."""

    kind: str = "?"

    # -- payload arithmetic, implemented by subclasses
    def _add(self, a, b): raise NotImplementedError
    def _sub(self, a, b): raise NotImplementedError
    def _mul(self, a, b): raise NotImplementedError
    def _neg(self, a): raise NotImplementedError
    def _inv(self, a): raise NotImplementedError
    def _is_zero(self, a) -> bool: raise NotImplementedError
    def _from_int(self, n: int): raise NotImplementedError
    def characteristic(self) -> int: raise NotImplementedError
    def render(self, a) -> str: raise NotImplementedError
    def parse_payload(self, s: str): raise NotImplementedError
    def payload_height(self, a) -> int: raise NotImplementedError
    def enumerate_payloads(self, height: int) -> Iterator: raise NotImplementedError
    def sample_payload(self, rng, height: int): raise NotImplementedError

    # -- scalar-level conveniences
    def scalar(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatch(f"{x.field} vs {self}")
            return x
        if isinstance(x, (int, mpz)):
            return Scalar(self, self._from_int(int(x)))
        if isinstance(x, str):
            return Scalar(self, self.parse_payload(x))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    @property
    def zero(self) -> Scalar:
        return Scalar(self, self._from_int(0))

    @property
    def one(self) -> Scalar:
        return Scalar(self, self._from_int(1))

    def parse(self, s: str) -> Scalar:
        return Scalar(self, self.parse_payload(s))

    def height(self, x: Scalar) -> int:
        return self.payload_height(self.scalar(x).v)

    def enumerate(self, height: int) -> Iterator[Scalar]:
        for p in self.enumerate_payloads(height):
            yield Scalar(self, p)

    def sample(self, rng, height: int) -> Scalar:
        return Scalar(self, self.sample_payload(rng, height))

    def to_json(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return self.kind


class _Rationals(Field):
    kind = "Q"

    def characteristic(self) -> int:
        return 0

    def _add(self, a, b): return a + b
    def _sub(self, a, b): return a - b
    def _mul(self, a, b): return a * b
    def _neg(self, a): return -a

    def _inv(self, a):
        if a == 0:
            raise DivisionByZero("1/0 in Q")
        return 1 / a

    def _is_zero(self, a) -> bool:
        return a == 0

    def _from_int(self, n: int):
        return mpq(n)

    def render(self, a) -> str:
        return str(a)

    def parse_payload(self, s: str):
        s = s.strip()
        try:
            return mpq(s)
        except ValueError as exc:
            raise ParseError(f"bad rational {s!r}") from exc

    def payload_height(self, a) -> int:
        return max(abs(int(a.numerator)), int(a.denominator))

    def enumerate_payloads(self, height: int) -> Iterator:
        yield mpq(0)
        for h in range(1, height + 1):
            for q in range(1, h + 1):
                for p in range(-h, h + 1):
                    if p != 0 and max(abs(p), q) == h and gcd(p, q) == 1:
                        yield mpq(p, q)

    def sample_payload(self, rng, height: int):
        q = rng.randint(1, height)
        p = rng.randint(-height, height)
        return mpq(p, q)

    def to_json(self) -> dict:
        return {"kind": "Q"}

    def __eq__(self, other):
        return isinstance(other, _Rationals)

    def __hash__(self):
        return hash("Q")


class _F2RationalFunctions(Field):
    """GF(2)(t): reduced fractions (num, den) of GF(2)[t] polynomials."""

    kind = "F2t"

    def characteristic(self) -> int:
        return 2

    @staticmethod
    def _reduce(num: int, den: int):
        if den == 0:
            raise DivisionByZero("zero denominator in F2t")
        if num == 0:
            return (0, 1)
        g = gf2_gcd(num, den)
        return (gf2_divmod(num, g)[0], gf2_divmod(den, g)[0])

    def _add(self, a, b):
        return self._reduce(gf2_mul(a[0], b[1]) ^ gf2_mul(b[0], a[1]),
                            gf2_mul(a[1], b[1]))

    _sub = _add  # characteristic 2

    def _mul(self, a, b):
        return self._reduce(gf2_mul(a[0], b[0]), gf2_mul(a[1], b[1]))

    def _neg(self, a):
        return a

    def _inv(self, a):
        if a[0] == 0:
            raise DivisionByZero("1/0 in F2t")
        return (a[1], a[0])

    def _is_zero(self, a) -> bool:
        return a[0] == 0

    def _from_int(self, n: int):
        return (n % 2, 1)

    def polynomial(self, bits: int) -> Scalar:
        """The polynomial with the given bitmask (bit i = coeff of t^i)."""
        return Scalar(self, (bits, 1))

    @property
    def t(self) -> Scalar:
        return Scalar(self, (2, 1))

    def render(self, a) -> str:
        num, den = a
        ns = gf2_poly_str(num)
        if den == 1:
            return ns
        if "+" in ns:
            ns = f"({ns})"
        ds = gf2_poly_str(den)
        if "+" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def parse_payload(self, s: str):
        s = s.strip()
        if "/" in s:
            ns, ds = s.split("/", 1)
            return self._reduce(gf2_poly_parse(ns), gf2_poly_parse(ds))
        return (gf2_poly_parse(s), 1)

    def payload_height(self, a) -> int:
        return max(gf2_deg(a[0]), gf2_deg(a[1]), 0)

    def enumerate_payloads(self, height: int) -> Iterator:
        yield (0, 1)
        seen = {(0, 1)}
        for h in range(0, height + 1):
            for den in range(1, 1 << (h + 1)):
                if gf2_deg(den) > h:
                    continue
                for num in range(1, 1 << (h + 1)):
                    if max(gf2_deg(num), gf2_deg(den)) != h:
                        continue
                    p = self._reduce(num, den)
                    if p not in seen:
                        seen.add(p)
                        yield p

    def sample_payload(self, rng, height: int):
        num = rng.randint(0, (1 << (height + 1)) - 1)
        den = rng.randint(1, (1 << (height + 1)) - 1)
        return self._reduce(num, den)

    def to_json(self) -> dict:
        return {"kind": "F2t"}

    def __eq__(self, other):
        return isinstance(other, _F2RationalFunctions)

    def __hash__(self):
        return hash("F2t")


QQ = _Rationals()
F2T = _F2RationalFunctions()


# ----------------------------------------------------------------------
# Dense polynomial helpers over an arbitrary Field (payload lists,
# ascending degree).  Used for extension arithmetic and irreducibility.

def _ptrim(F: Field, f: list) -> list:
    while f and F._is_zero(f[-1]):
        f.pop()
    return f


def _padd(F: Field, f: Sequence, g: Sequence) -> list:
    n = max(len(f), len(g))
    z = F._from_int(0)
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else z
        b = g[i] if i < len(g) else z
        out.append(F._add(a, b))
    return _ptrim(F, out)


def _psub(F: Field, f: Sequence, g: Sequence) -> list:
    return _padd(F, f, [F._neg(c) for c in g])


def _pmul(F: Field, f: Sequence, g: Sequence) -> list:
    if not f or not g:
        return []
    out = [F._from_int(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F._is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F._add(out[i + j], F._mul(a, b))
    return _ptrim(F, out)


def _pdivmod(F: Field, f: Sequence, g: Sequence) -> tuple[list, list]:
    g = list(g)
    if not g:
        raise DivisionByZero("polynomial division by zero")
    f = list(f)
    ginv = F._inv(g[-1])
    q = [F._from_int(0)] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        c = F._mul(f[-1], ginv)
        d = len(f) - len(g)
        q[d] = c
        for i, gc in enumerate(g):
            f[d + i] = F._sub(f[d + i], F._mul(c, gc))
        f = _ptrim(F, f)
    return _ptrim(F, q), f


def _pmonic(F: Field, f: Sequence) -> list:
    f = list(f)
    if not f:
        return f
    inv = F._inv(f[-1])
    return [F._mul(c, inv) for c in f]


def _pxgcd(F: Field, f: Sequence, g: Sequence) -> tuple[list, list, list]:
    """Extended gcd: returns (d, u, v) monic with u*f + v*g = d."""
    r0, r1 = list(f), list(g)
    s0, s1 = [F._from_int(1)], []
    t0, t1 = [], [F._from_int(1)]
    while r1:
        q, r = _pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(F, s0, _pmul(F, q, s1))
        t0, t1 = t1, _psub(F, t0, _pmul(F, q, t1))
    if not r0:
        return [], s0, t0
    lead_inv = F._inv(r0[-1])
    scale = [lead_inv]
    return (_pmul(F, r0, scale), _pmul(F, s0, scale), _pmul(F, t0, scale))


def _peval(F: Field, f: Sequence, x):
    acc = F._from_int(0)
    for c in reversed(list(f)):
        acc = F._add(F._mul(acc, x), c)
    return acc


class SimpleExtensionField(Field):
    """F[x]/(f) for monic irreducible f over QQ or F2T, degree 2..5."""

    kind = "ext"

    def __init__(self, base: Field, minpoly: tuple, _checked: bool = False):
        if not _checked:
            raise RuntimeError("use extend() to build extension fields")
        self.base = base
        self.minpoly = minpoly  # payload tuple, ascending, monic, len = deg+1
        self.degree = len(minpoly) - 1

    def characteristic(self) -> int:
        return self.base.characteristic()

    # payloads: tuples of base payloads, length self.degree
    def _tuple(self, lst) -> tuple:
        z = self.base._from_int(0)
        lst = list(lst)[: self.degree]
        while len(lst) < self.degree:
            lst.append(z)
        return tuple(lst)

    def _add(self, a, b):
        B = self.base
        return tuple(B._add(x, y) for x, y in zip(a, b))

    def _sub(self, a, b):
        B = self.base
        return tuple(B._sub(x, y) for x, y in zip(a, b))

    def _neg(self, a):
        B = self.base
        return tuple(B._neg(x) for x in a)

    def _mul(self, a, b):
        B = self.base
        prod = _pmul(B, list(a), list(b))
        _, rem = _pdivmod(B, prod, list(self.minpoly))
        return self._tuple(rem)

    def _inv(self, a):
        B = self.base
        fa = _ptrim(B, list(a))
        if not fa:
            raise DivisionByZero("1/0 in extension field")
        d, u, _ = _pxgcd(B, fa, list(self.minpoly))
        if len(d) != 1:
            raise DivisionByZero("non-invertible element (minpoly not irreducible?)")
        inv_d = B._inv(d[0])
        _, rem = _pdivmod(B, _pmul(B, u, [inv_d]), list(self.minpoly))
        return self._tuple(rem)

    def _is_zero(self, a) -> bool:
        return all(self.base._is_zero(c) for c in a)

    def _from_int(self, n: int):
        return self._tuple([self.base._from_int(n)])

    def embed(self, x) -> Scalar:
        """Embed a base-field scalar into the extension."""
        xs = self.base.scalar(x)
        return Scalar(self, self._tuple([xs.v]))

    @property
    def generator(self) -> Scalar:
        z = self.base._from_int(0)
        o = self.base._from_int(1)
        return Scalar(self, self._tuple([z, o]))

    def render(self, a) -> str:
        return "[" + ",".join(self.base.render(c) for c in a) + "]"

    def parse_payload(self, s: str):
        s = s.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise ParseError(f"extension scalar must look like [a0,...]: {s!r}")
        inner = s[1:-1].strip()
        parts = [p for p in inner.split(",")] if inner else []
        if len(parts) != self.degree:
            raise ParseError(f"expected {self.degree} coordinates in {s!r}")
        return tuple(self.base.parse_payload(p) for p in parts)

    def payload_height(self, a) -> int:
        return max(self.base.payload_height(c) for c in a)

    def enumerate_payloads(self, height: int) -> Iterator:
        base_payloads = list(self.base.enumerate_payloads(height))
        for combo in itertools.product(base_payloads, repeat=self.degree):
            yield tuple(combo)

    def sample_payload(self, rng, height: int):
        return tuple(self.base.sample_payload(rng, height) for _ in range(self.degree))

    def to_json(self) -> dict:
        return {
            "kind": "ext",
            "base": self.base.to_json(),
            "minpoly": [self.base.render(c) for c in self.minpoly],
        }

    def __eq__(self, other):
        return (isinstance(other, SimpleExtensionField)
                and self.base == other.base
                and self.minpoly == other.minpoly)

    def __hash__(self):
        return hash(("ext", self.base, self.minpoly))

    def __repr__(self):
        mp = "+".join(f"{self.base.render(c)}*x^{i}" for i, c in enumerate(self.minpoly))
        return f"ext({self.base!r}; {mp})"


# ----------------------------------------------------------------------
# Irreducibility for degree <= 5.
#
# deg 2, 3: reducible  <=>  there is a root.
# deg 4:    reducible  <=>  root or monic quadratic factor.
# deg 5:    reducible  <=>  root or monic quadratic factor.
# Root search and quadratic sweeps are complete over Z resp. GF(2)[t]
# after the usual monic-preserving substitution x -> y/d clearing
# denominators (Gauss's lemma).

def _int_divisors(m: int) -> list[int]:
    m = abs(m)
    divs = []
    i = 1
    while i * i <= m:
        if m % i == 0:
            divs.append(i)
            if i != m // i:
                divs.append(m // i)
        i += 1
    return sorted(divs)


def _is_perfect_square(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def _irreducible_factor_q(coeffs: list) -> Optional[list]:
    """Return a monic proper factor of a monic QQ-polynomial, or None.

    Complete for degree <= 5.
    """
    n = len(coeffs) - 1
    d = 1
    for c in coeffs[:-1]:
        den = int(mpq(c).denominator)
        d = d * den // gcd(d, den)
    # g(y) = d^n f(y/d): monic integer polynomial
    g = [int(mpq(coeffs[i]) * mpq(d) ** (n - i)) for i in range(n)] + [1]

    def back_map(factor_int: list) -> list:
        k = len(factor_int) - 1
        return [mpq(factor_int[i], mpq(d) ** (k - i)) for i in range(k)] + [mpq(1)]

    # roots
    if g[0] == 0:
        return back_map([0, 1])
    for r0 in _int_divisors(g[0]):
        for r in (r0, -r0):
            acc = 0
            for c in reversed(g):
                acc = acc * r + c
            if acc == 0:
                return back_map([-r, 1])
    if n <= 3:
        return None

    def poly_from(*fs):
        out = [1]
        for f in fs:
            new = [0] * (len(out) + len(f) - 1)
            for i, a in enumerate(out):
                for j, b in enumerate(f):
                    new[i + j] += a * b
            out = new
        return out

    if n == 4:
        g0, g1, g2, g3 = g[0], g[1], g[2], g[3]
        for v0 in _int_divisors(g0):
            for v in (v0, -v0):
                if g0 % v != 0:
                    continue
                z = g0 // v
                disc = g3 * g3 - 4 * (g2 - v - z)
                s = _is_perfect_square(disc)
                if s is None:
                    continue
                for u in {(g3 + s), (g3 - s)}:
                    if u % 2 != 0:
                        continue
                    u //= 2
                    w = g3 - u
                    if g1 == u * z + v * w:
                        quad = [v, u, 1]
                        if poly_from(quad, [z, w, 1]) == g:
                            return back_map(quad)
        return None

    if n == 5:
        g0, g1, g2, g3, g4 = g[0], g[1], g[2], g[3], g[4]
        for v0 in _int_divisors(g0):
            for v in (v0, -v0):
                if g0 % v != 0:
                    continue
                r = g0 // v
                # v*u^2 + (r - v*g4)*u + (v*g3 - v^2 - g1) = 0
                A, B, C = v, r - v * g4, v * g3 - v * v - g1
                disc = B * B - 4 * A * C
                s = _is_perfect_square(disc)
                if s is None:
                    continue
                for num in {(-B + s), (-B - s)}:
                    if num % (2 * A) != 0:
                        continue
                    u = num // (2 * A)
                    p = g4 - u
                    q = g3 - v - u * p
                    quad = [v, u, 1]
                    if poly_from(quad, [r, q, p, 1]) == g:
                        return back_map(quad)
        return None

    raise DegreeUnsupported(f"degree {n} not supported")


def _gf2_solve_monic_quadratic(B: int, C: int) -> list[int]:
    """Roots in GF(2)[t] of T^2 + B*T + C = 0 (complete via T | C)."""
    if C == 0:
        return [0, B] if B else [0]
    roots = []
    for T in gf2_divisors(C):
        if gf2_mul(T, T) ^ gf2_mul(B, T) ^ C == 0:
            roots.append(T)
    return roots


def _irreducible_factor_f2t(coeffs: list) -> Optional[list]:
    """Monic proper factor of a monic F2T-polynomial, or None (deg <= 5)."""
    n = len(coeffs) - 1
    d = 1
    for (num, den) in coeffs[:-1]:
        g = gf2_gcd(d, den)
        d = gf2_mul(gf2_divmod(d, g)[0], den)
    # g(y) = d^n f(y/d): coefficients in GF(2)[t]
    g = []
    for i in range(n):
        num, den = coeffs[i]
        val = gf2_mul(num, gf2_pow(d, n - i))
        q, r = gf2_divmod(val, den)
        assert r == 0
        g.append(q)
    g.append(1)

    def back_map(factor_poly: list) -> list:
        k = len(factor_poly) - 1
        out = []
        for i in range(k):
            out.append(F2T._reduce(factor_poly[i], gf2_pow(d, k - i)))
        out.append((1, 1))
        return out

    def gmul(*fs):
        out = [1]
        for f in fs:
            new = [0] * (len(out) + len(f) - 1)
            for i, a in enumerate(out):
                for j, b in enumerate(f):
                    new[i + j] ^= gf2_mul(a, b)
            out = new
        return out

    if g[0] == 0:
        return back_map([0, 1])
    for r in gf2_divisors(g[0]):
        acc = 0
        for c in reversed(g):
            acc = gf2_mul(acc, r) ^ c
        if acc == 0:
            return back_map([r, 1])
    if n <= 3:
        return None

    if n == 4:
        g0, g1, g2, g3 = g[0], g[1], g[2], g[3]
        for v in gf2_divisors(g0):
            z = gf2_divmod(g0, v)[0]
            C = g2 ^ v ^ z
            for u in _gf2_solve_monic_quadratic(g3, C):
                w = g3 ^ u
                if g1 == gf2_mul(u, z) ^ gf2_mul(v, w):
                    quad = [v, u, 1]
                    if gmul(quad, [z, w, 1]) == g:
                        return back_map(quad)
        return None

    if n == 5:
        g0, g1, g2, g3, g4 = g[0], g[1], g[2], g[3], g[4]
        for v in gf2_divisors(g0):
            r = gf2_divmod(g0, v)[0]
            # v*u^2 + (r + v*g4)*u + (v*g3 + v^2 + g1) = 0 ; T = v*u
            B = r ^ gf2_mul(v, g4)
            C = gf2_mul(v, g3) ^ gf2_mul(v, v) ^ g1
            AC = gf2_mul(v, C)
            for T in _gf2_solve_monic_quadratic(B, AC):
                q_, rem = gf2_divmod(T, v) if v != 1 else (T, 0)
                if rem != 0:
                    continue
                u = q_
                p = g4 ^ u
                qq = g3 ^ v ^ gf2_mul(u, p)
                quad = [v, u, 1]
                if gmul(quad, [r, qq, p, 1]) == g:
                    return back_map(quad)
        return None

    raise DegreeUnsupported(f"degree {n} not supported")


def irreducible_factor(F: Field, coeffs: Sequence) -> Optional[list[Scalar]]:
    """A proper monic factor of the given monic polynomial over F, or None.

    Decision is complete for degrees up to 5 over QQ and F2T.
    """
    cs = [F.scalar(c) for c in coeffs]
    n = len(cs) - 1
    if n < 1:
        raise DegreeUnsupported("constant polynomial")
    if cs[-1] != F.one:
        raise ValueError("polynomial must be monic")
    if n == 1:
        return None
    if n > 5:
        raise DegreeUnsupported(f"irreducibility undecided for degree {n} > 5")
    if isinstance(F, _Rationals):
        fac = _irreducible_factor_q([c.v for c in cs])
    elif isinstance(F, _F2RationalFunctions):
        fac = _irreducible_factor_f2t([c.v for c in cs])
    else:
        raise UnsupportedBase(
            "irreducibility is only decided over Q and F2t; "
            "towers of extensions are not supported")
    if fac is None:
        return None
    return [Scalar(F, p) for p in fac]


def extend(F: Field, coeffs: Sequence) -> SimpleExtensionField:
    """Build F[x]/(f) for monic f of degree 2..5, verifying irreducibility.

    Raises Reducible (with a factor witness), DegreeUnsupported, or
    UnsupportedBase.
    """
    cs = [F.scalar(c) for c in coeffs]
    n = len(cs) - 1
    if n < 2 or n > 5:
        raise DegreeUnsupported(f"extension degree must be 2..5, got {n}")
    fac = irreducible_factor(F, cs)
    if fac is not None:
        raise Reducible([str(c) for c in cs], [str(c) for c in fac])
    return SimpleExtensionField(F, tuple(c.v for c in cs), _checked=True)


def characteristic(F: Field) -> int:
    return F.characteristic()


_ARITH_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
    "neg": lambda x, y: -x,
    "inv": lambda x, y: x.inv(),
}


def arith(op: str, x: Scalar, y: Optional[Scalar] = None) -> Scalar:
    """Dispatcher form of the field operations (used by the CLI layer)."""
    if op not in _ARITH_OPS:
        raise ValueError(f"unknown op {op!r}")
    if op in ("add", "sub", "mul", "div") and not isinstance(y, Scalar):
        raise TypeError(f"{op} needs two scalars")
    return _ARITH_OPS[op](x, y)


def field_from_json(obj: dict) -> Field:
    kind = obj.get("kind")
    if kind == "Q":
        return QQ
    if kind == "F2t":
        return F2T
    if kind == "ext":
        base = field_from_json(obj["base"])
        coeffs = [base.parse(c) for c in obj["minpoly"]]
        return extend(base, coeffs)
    raise ParseError(f"unknown field kind {kind!r}")
