"""Gaussian elimination over an exact :class:`~dgmc.scalars.Field`.

Matrices are lists of rows.  Nothing here knows about categories; callers
flatten their modules to k-coordinates first.
"""
from __future__ import annotations

from typing import Sequence


def rref(rows: Sequence[Sequence], F, ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(reduced_rows, pivot_columns)``."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, F, ncols: int | None = None) -> int:
    return len(rref(rows, F, ncols)[1])


def kernel(rows, F, ncols: int) -> list[list]:
    """Basis of {x : A x = 0} for an ``len(rows) x ncols`` matrix A."""
    red, pivots = rref(rows, F, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [F.zero] * ncols
        v[f] = F.one
        for row, p in zip(red, pivots):
            v[p] = F.neg(row[f])
        basis.append(v)
    return basis


def solve(rows, rhs: Sequence, F, ncols: int):
    """One solution x of A x = rhs, or None.  Free variables are set to 0."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, F, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [F.zero] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def transpose(rows, ncols: int):
    return [[r[j] for r in rows] for j in range(ncols)]


def matmul(A, B, F, inner: int | None = None):
    if not A:
        return []
    if inner is None:
        inner = len(B)
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [F.zero] * ncols
        for k in range(inner):
            a = row[k]
            if a == 0:
                continue
            for j, b in enumerate(B[k]):
                if b != 0:
                    acc[j] = F.add(acc[j], F.mul(a, b))
        out.append(acc)
    return out


def matvec(A, v, F):
    out = []
    for row in A:
        acc = F.zero
        for a, x in zip(row, v):
            if a != 0 and x != 0:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


def identity(n: int, F):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def is_zero_matrix(A) -> bool:
    return all(x == 0 for row in A for x in row)
