"""Exact utilities for quadratic equations over Q.

Everything here is integer / gmpy2.mpq arithmetic: sums of four squares,
rational square testing, Hilbert symbols, isotropy of ternary forms
(decided through the local symbols), rational points on conics, and
Sylvester inertia of symmetric rational matrices.
"""

from __future__ import annotations

from math import gcd, isqrt
from typing import Optional, Sequence

from gmpy2 import mpq

from .scalars import QQ, Scalar


def _as_mpq(x) -> mpq:
    if isinstance(x, Scalar):
        if x.field != QQ:
            raise ValueError("expected a rational scalar")
        return x.v
    return mpq(x)


# ---------------------------------------------------------------- squares

def int_sqrt_exact(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def rational_sqrt(x) -> Optional[Scalar]:
    """Exact square root in Q, or None if x is not a square."""
    q = _as_mpq(x)
    if q < 0:
        return None
    rn = int_sqrt_exact(int(q.numerator))
    rd = int_sqrt_exact(int(q.denominator))
    if rn is None or rd is None:
        return None
    return QQ.scalar(0) + Scalar(QQ, mpq(rn, rd))


def same_square_class(a, b) -> Optional[bool]:
    """Whether a and b differ by a nonzero rational square (None if either is 0)."""
    qa, qb = _as_mpq(a), _as_mpq(b)
    if qa == 0 or qb == 0:
        return None
    return rational_sqrt(qa / qb) is not None


def two_squares_int(n: int) -> Optional[tuple[int, int]]:
    if n < 0:
        return None
    if n == 0:
        return (0, 0)
    x = isqrt(n)
    while 2 * x * x >= n:
        y = int_sqrt_exact(n - x * x)
        if y is not None:
            return (x, y)
        x -= 1
    return None


def three_squares_int(n: int) -> Optional[tuple[int, int, int]]:
    if n < 0:
        return None
    if n == 0:
        return (0, 0, 0)
    s = 1
    while n % 4 == 0:
        n //= 4
        s *= 2
    if n % 8 == 7:
        return None
    for x in range(isqrt(n), -1, -1):
        pair = two_squares_int(n - x * x)
        if pair is not None:
            return (s * x, s * pair[0], s * pair[1])
    return None  # not reached: every n != 4^a(8b+7) is a sum of three squares


def four_squares_int(n: int) -> tuple[int, int, int, int]:
    """Lagrange decomposition n = a^2+b^2+c^2+d^2 for n >= 0."""
    if n < 0:
        raise ValueError("need n >= 0")
    if n == 0:
        return (0, 0, 0, 0)
    s = 1
    while n % 4 == 0:
        n //= 4
        s *= 2
    trip = three_squares_int(n)
    if trip is not None:
        a, b, c = trip
        return (s * a, s * b, s * c, 0)
    # n = 7 mod 8: peel one square off
    for x in range(isqrt(n), 0, -1):
        trip = three_squares_int(n - x * x)
        if trip is not None:
            a, b, c = trip
            return (s * x, s * a, s * b, s * c)
    raise AssertionError("four squares must exist")


def four_squares(r) -> tuple[Scalar, Scalar, Scalar, Scalar]:
    """Write a nonnegative rational as a sum of four rational squares."""
    q = _as_mpq(r)
    if q < 0:
        raise ValueError("need r >= 0")
    p, d = int(q.numerator), int(q.denominator)
    a, b, c, e = four_squares_int(p * d)
    return tuple(Scalar(QQ, mpq(v, d)) for v in (a, b, c, e))


# ---------------------------------------------------------------- factoring

def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rational_primes(x) -> set[int]:
    q = _as_mpq(x)
    if q == 0:
        return set()
    return set(factor_int(int(q.numerator))) | set(factor_int(int(q.denominator)))


def valuation(x, p: int) -> int:
    q = _as_mpq(x)
    if q == 0:
        raise ValueError("valuation of 0")
    v = 0
    n = int(q.numerator)
    while n % p == 0:
        n //= p
        v += 1
    d = int(q.denominator)
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _unit_part(x, p: int) -> int:
    """x / p^v(x) as an integer mod a sufficient power (here: exact integer pair)."""
    q = _as_mpq(x)
    n, d = int(q.numerator), int(q.denominator)
    while n % p == 0:
        n //= p
    while d % p == 0:
        d //= p
    return n, d


def legendre(a: int, p: int) -> int:
    """(a/p) for odd prime p, a coprime to p: +1 or -1."""
    r = pow(a % p, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def hilbert_symbol(a, b, place) -> int:
    """(a,b)_v for v = -1 (the real place), 2, or an odd prime.

    a, b nonzero rationals.
    """
    qa, qb = _as_mpq(a), _as_mpq(b)
    if qa == 0 or qb == 0:
        raise ValueError("hilbert symbol needs nonzero entries")
    if place == -1:
        return -1 if (qa < 0 and qb < 0) else 1
    p = place
    alpha, beta = valuation(qa, p), valuation(qb, p)
    un, ud = _unit_part(qa, p)
    wn, wd = _unit_part(qb, p)
    if p == 2:
        # units mod 8
        u = (un * pow(ud, -1, 8)) % 8
        w = (wn * pow(wd, -1, 8)) % 8
        eps_u, eps_w = (u - 1) // 2 % 2, (w - 1) // 2 % 2
        om_u, om_w = (u * u - 1) // 8 % 2, (w * w - 1) // 8 % 2
        e = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if e % 2 else 1
    u = (un * pow(ud, -1, p)) % p
    w = (wn * pow(wd, -1, p)) % p
    s = 1
    if alpha % 2 and beta % 2 and (p - 1) // 2 % 2:
        s = -s
    if beta % 2 and legendre(u, p) == -1:
        s = -s
    if alpha % 2 and legendre(w, p) == -1:
        s = -s
    return s


def ternary_isotropic(a, b, c) -> bool:
    """Whether a*x^2 + b*y^2 + c*z^2 = 0 has a nontrivial rational solution.

    Decided by checking the Hilbert symbol (-ac, -bc)_v at every relevant
    place (the real place, 2, and the primes meeting a, b, c).
    """
    qa, qb, qc = _as_mpq(a), _as_mpq(b), _as_mpq(c)
    if qa == 0 or qb == 0 or qc == 0:
        return True  # a zero coefficient gives an obvious nontrivial zero
    u, v = -qa * qc, -qb * qc
    places = {-1, 2} | rational_primes(qa) | rational_primes(qb) | rational_primes(qc)
    return all(hilbert_symbol(u, v, p) == 1 for p in places)


def conic_solvable(a, b, n) -> bool:
    """Whether a*s^2 + b*t^2 = n has a rational solution (n may be 0)."""
    qn = _as_mpq(n)
    if qn == 0:
        return True  # (0, 0)
    return ternary_isotropic(_as_mpq(a), _as_mpq(b), -qn)


def conic_point(a, b, n, budget: int = 64) -> Optional[tuple[Scalar, Scalar]]:
    """A rational point (s, t) with a*s^2 + b*t^2 = n.

    A short integer sweep first (it returns the small points the tests
    pin down), then the homogenized ternary form is solved exactly, so
    None means the conic really has no rational point.
    """
    qa, qb, qn = _as_mpq(a), _as_mpq(b), _as_mpq(n)
    if qa == 0:
        raise ValueError("need a != 0")
    if qn == 0:
        return (QQ.zero, QQ.zero)
    for z in range(1, min(budget, 32) + 1):
        zz = qn * z * z
        for y in range(0, min(budget, 32) + 1):
            rest = (zz - qb * y * y) / qa
            r = rational_sqrt(rest)
            if r is not None and int(r.v.denominator) == 1:
                return (Scalar(QQ, r.v / z), Scalar(QQ, mpq(y, z)))
    if qb == 0:
        r = rational_sqrt(qn / qa)
        return None if r is None else (r, QQ.zero)
    from sympy import Integer, factorint, symbols
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic

    def sqf_part(r: mpq) -> int:
        # r = s * u^2 with s a squarefree integer carrying the sign
        s = -1 if r < 0 else 1
        for m in (int(r.numerator), int(r.denominator)):
            for p, e in factorint(abs(m)).items():
                if e % 2:
                    s *= p
        return s

    # the descent solver chokes on large non-normalized coefficients, so
    # divide through by a and split off the square parts first
    r1, r2 = qb / qa, qn / qa
    s1, s2 = sqf_part(r1), sqf_part(r2)
    u1 = rational_sqrt(r1 / s1).v
    u2 = rational_sqrt(r2 / s2).v
    x, y, z = symbols("x y z", integer=True)
    sol = diop_ternary_quadratic(
        x**2 + Integer(s1) * y**2 - Integer(s2) * z**2)
    if sol is None or sol[0] is None:
        return None
    X, Y, Z = (int(v) for v in sol)
    if X == 0 and Y == 0 and Z == 0:
        return None
    if Z != 0:
        return (Scalar(QQ, u2 * mpq(X, Z)), Scalar(QQ, u2 * mpq(Y, Z) / u1))
    # solution at infinity: r1 = -(q u1)^2 with q = X/Y, so the equation
    # factors as (s - q u1 t)(s + q u1 t) = r2; pick the chord s + q u1 t = 1
    q = mpq(X, Y)
    return (Scalar(QQ, (1 + r2) / 2), Scalar(QQ, (1 - r2) / (2 * q * u1)))


# ---------------------------------------------------------------- inertia

def inertia(rows: Sequence[Sequence]) -> tuple[int, int, int]:
    """Sylvester inertia (n_pos, n_neg, n_zero) of a symmetric rational matrix.

    Exact symmetric elimination; zero pivots handled by diagonal swaps and,
    failing that, hyperbolic 2x2 blocks.
    """
    n = len(rows)
    M = [[_as_mpq(rows[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")
    pos = neg = zero = 0
    idx = list(range(n))  # live indices
    while idx:
        i = idx[0]
        pivot = None
        for k in idx:
            if M[k][k] != 0:
                pivot = k
                break
        if pivot is not None:
            d = M[pivot][pivot]
            if d > 0:
                pos += 1
            else:
                neg += 1
            rest = [k for k in idx if k != pivot]
            for r in rest:
                f = M[r][pivot] / d
                if f != 0:
                    for c in rest:
                        M[r][c] -= f * M[pivot][c]
            for r in rest:
                M[r][pivot] = mpq(0)
                M[pivot][r] = mpq(0)
            idx = rest
            continue
        # all live diagonal entries are zero
        off = None
        for r in idx:
            for c in idx:
                if r < c and M[r][c] != 0:
                    off = (r, c)
                    break
            if off:
                break
        if off is None:
            zero += len(idx)
            break
        r, c = off
        # x_r x_c block: signature (+1, -1) after u = x_r + x_c, v = x_r - x_c
        pos += 1
        neg += 1
        rest = [k for k in idx if k not in (r, c)]
        e = M[r][c]
        # replace x_k by x_k + lam_k x_r + mu_k x_c, chosen to null out the
        # pairings with the block
        lam = {k: -M[k][c] / e for k in rest}
        mu = {k: -M[k][r] / e for k in rest}
        snap = {(k, l): M[k][l] for k in rest for l in rest}
        row_r = {l: M[r][l] for l in rest}
        row_c = {l: M[c][l] for l in rest}
        kr = {k: M[k][r] for k in rest}
        kc = {k: M[k][c] for k in rest}
        for k in rest:
            for l in rest:
                M[k][l] = (snap[(k, l)]
                           + lam[k] * row_r[l] + mu[k] * row_c[l]
                           + lam[l] * kr[k] + mu[l] * kc[k]
                           + (lam[k] * mu[l] + mu[k] * lam[l]) * e)
            M[k][r] = M[r][k] = mpq(0)
            M[k][c] = M[c][k] = mpq(0)
        idx = rest
    return pos, neg, zero


def definiteness(rows: Sequence[Sequence]) -> str:
    """'positive', 'negative', 'indefinite', or 'degenerate'."""
    p, m, z = inertia(rows)
    if z:
        return "degenerate"
    if m == 0:
        return "positive"
    if p == 0:
        return "negative"
    return "indefinite"


# ---------------------------------------------------------------- real roots

def _sign(q: mpq) -> int:
    return 0 if q == 0 else (1 if q > 0 else -1)


def real_root_exists(coeffs: Sequence) -> bool:
    """Whether a univariate rational polynomial has a real root (Sturm).

    coeffs ascending; exact throughout.
    """
    from .scalars import QQ as _QQ, _pdivmod, _ptrim, _pxgcd

    f = _ptrim(_QQ, [_as_mpq(c) for c in coeffs])
    if not f:
        return True  # the zero polynomial
    if len(f) == 1:
        return False
    df = [i * f[i] for i in range(1, len(f))]
    g, _, _ = _pxgcd(_QQ, f, df)
    if len(g) > 1:
        f, _ = _pdivmod(_QQ, f, g)  # squarefree part keeps the same roots
        if len(f) == 1:
            return False
        df = [i * f[i] for i in range(1, len(f))]
    chain = [f, df]
    while len(chain[-1]) > 0:
        _, r = _pdivmod(_QQ, chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])

    def variations(at_plus_inf: bool) -> int:
        signs = []
        for p in chain:
            s = _sign(p[-1])
            if not at_plus_inf and (len(p) - 1) % 2 == 1:
                s = -s
            if s != 0:
                signs.append(s)
        return sum(1 for x, y in zip(signs, signs[1:]) if x != y)

    return variations(False) - variations(True) > 0
