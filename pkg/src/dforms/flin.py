"""Small exact linear algebra over a base field.

Matrices are lists of rows of Scalars, vectors are lists of Scalars;
everything is over a single Field and all elimination is exact.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .scalars import Field, Scalar


def zeros(F: Field, n: int, m: int) -> list[list[Scalar]]:
    return [[F.zero for _ in range(m)] for _ in range(n)]


def identity(F: Field, n: int) -> list[list[Scalar]]:
    M = zeros(F, n, n)
    for i in range(n):
        M[i][i] = F.one
    return M


def mat_mul(A: Sequence[Sequence[Scalar]], B: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for l in range(1, k):
                acc = acc + A[i][l] * B[l][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A: Sequence[Sequence[Scalar]], x: Sequence[Scalar]) -> list[Scalar]:
    out = []
    for row in A:
        acc = row[0] * x[0]
        for l in range(1, len(x)):
            acc = acc + row[l] * x[l]
        out.append(acc)
    return out


def transpose(A: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    return [list(col) for col in zip(*A)]


def rref(M: Sequence[Sequence[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form and pivot columns (exact)."""
    R = [list(row) for row in M]
    if not R:
        return R, []
    rows, cols = len(R), len(R[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if not R[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = R[r][c].inv()
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [R[i][j] - f * R[r][j] for j in range(cols)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(M: Sequence[Sequence[Scalar]]) -> int:
    return len(rref(M)[1])


def kernel_basis(F: Field, M: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Basis of {x : Mx = 0}."""
    if not M:
        return []
    cols = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [F.zero] * cols
        v[fc] = F.one
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def column_space_basis(M: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    """Basis of the column space, as column vectors (original columns)."""
    _, pivots = rref(M)
    return [[row[c] for row in M] for c in pivots]


def row_space_basis(M: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
    R, pivots = rref(M)
    return [R[i] for i in range(len(pivots))]


def solve(F: Field, M: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> Optional[list[Scalar]]:
    """One solution of Mx = b, or None."""
    if not M:
        return [] if all(x.is_zero() for x in b) else None
    cols = len(M[0])
    aug = [list(row) + [b[i]] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [F.zero] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return x


def in_span(F: Field, vectors: Sequence[Sequence[Scalar]], target: Sequence[Scalar]) -> Optional[list[Scalar]]:
    """Coefficients writing target as a combination of vectors, or None."""
    if not vectors:
        return [] if all(x.is_zero() for x in target) else None
    M = transpose(vectors)
    return solve(F, M, list(target))


def det(F: Field, M: Sequence[Sequence[Scalar]]) -> Scalar:
    """Exact determinant by fraction-free-ish elimination with division."""
    n = len(M)
    A = [list(row) for row in M]
    acc = F.one
    sign = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not A[i][c].is_zero():
                piv = i
                break
        if piv is None:
            return F.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        acc = acc * A[c][c]
        inv = A[c][c].inv()
        for i in range(c + 1, n):
            if not A[i][c].is_zero():
                f = A[i][c] * inv
                A[i] = [A[i][j] - f * A[c][j] for j in range(n)]
    return acc if sign == 1 else -acc


def mat_inv(F: Field, M: Sequence[Sequence[Scalar]]) -> Optional[list[list[Scalar]]]:
    n = len(M)
    aug = [list(M[i]) + identity(F, n)[i] for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in R[:n]]
