"""Dense exact linear algebra over a :class:`~ncmf.scalar.Field`.

Matrices are lists of rows of raw field values.  The routines are plain
Gaussian elimination; sizes in this package stay in the low hundreds.
"""

from __future__ import annotations

from typing import Sequence

__all__ = [
    "rref",
    "rank",
    "nullspace",
    "solve",
    "inverse",
    "matmul",
    "matvec",
    "identity",
    "transpose",
    "Echelon",
]


def identity(F, n: int):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def transpose(M, ncols: int | None = None):
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(F, A, B, inner: int | None = None):
    """Product A·B; ``inner`` is needed only when A has no rows or B none."""
    if not A:
        return []
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [F.zero] * m
        for k, a in enumerate(row):
            if a == 0:
                continue
            for j, b in enumerate(B[k]):
                if b != 0:
                    acc[j] = F.add(acc[j], F.mul(a, b))
        out.append(acc)
    return out


def matvec(F, A, v):
    out = []
    for row in A:
        acc = F.zero
        for a, b in zip(row, v):
            if a != 0 and b != 0:
                acc = F.add(acc, F.mul(a, b))
        out.append(acc)
    return out


def rref(F, M, ncols: int | None = None):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in M]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                k = rows[i][c]
                rows[i] = [F.sub(x, F.mul(k, y)) if y != 0 else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(F, M) -> int:
    return len(rref(F, M)[0])


def nullspace(F, M, ncols: int | None = None):
    """Basis of {v : M v = 0}, one vector per free column, in column order."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(F, M, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [F.zero] * ncols
        v[free] = F.one
        for row, pc in zip(R, pivots):
            if row[free] != 0:
                v[pc] = F.neg(row[free])
        basis.append(v)
    return basis


def solve(F, M, b, ncols: int | None = None):
    """One solution of M x = b, or None.  Free variables are set to zero."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(F, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [F.zero] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x


def inverse(F, M):
    """Inverse of a square matrix, or None when singular."""
    n = len(M)
    aug = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(F, aug, 2 * n)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in R]


class Echelon:
    """Incrementally maintained row space in reduced echelon form."""

    def __init__(self, F, ncols: int):
        self.F = F
        self.ncols = ncols
        self.rows: list[list] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence):
        F = self.F
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            if v[pc] != 0:
                k = v[pc]
                v = [F.sub(x, F.mul(k, y)) if y != 0 else x for x, y in zip(v, row)]
        return v

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; return True iff it enlarged the span."""
        F = self.F
        w = self.reduce(v)
        pc = next((i for i, x in enumerate(w) if x != 0), None)
        if pc is None:
            return False
        inv = F.inv(w[pc])
        w = [F.mul(inv, x) for x in w]
        for i, row in enumerate(self.rows):
            if row[pc] != 0:
                k = row[pc]
                self.rows[i] = [F.sub(x, F.mul(k, y)) if y != 0 else x for x, y in zip(row, w)]
        self.rows.append(w)
        self.pivots.append(pc)
        return True

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def __len__(self):
        return len(self.rows)
