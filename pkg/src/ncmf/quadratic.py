"""Quadratic duals via orthogonal complements of relation spaces.

The relation space R of a presentation lives in V (x) V with basis
``x_i x_j``, coordinate ``i*n + j``.  The dual algebra has relation space
R-perp under the pairing that makes ``x_i* x_j*`` dual to ``x_i x_j``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import PresentedAlgebra
from .scalar import Field

__all__ = ["RawRelations", "relation_space", "quadratic_dual", "recognize"]


@dataclass(frozen=True)
class RawRelations:
    """A quadratic algebra given only by its relation space (RREF rows)."""

    field: Field
    n: int
    rows: tuple

    def describe(self) -> list:
        """Relations as text, e.g. ``['x1*x2', 'x2*x1 - 3*x1*x2']``."""
        F = self.field
        out = []
        for row in self.rows:
            parts = []
            for k, c in enumerate(row):
                if c == 0:
                    continue
                i, j = divmod(k, self.n)
                mono = f"x{i + 1}*x{j + 1}"
                parts.append(mono if c == F.one else f"{F.fmt(c)}*{mono}")
            out.append(" + ".join(parts))
        return out


def relation_space(A) -> tuple:
    """RREF rows spanning the relation space of A (PresentedAlgebra or RawRelations)."""
    if isinstance(A, RawRelations):
        return A.rows
    F, n = A.field, A.n
    rows = []
    for rel in A.relations():
        v = [F.zero] * (n * n)
        for (i, j), c in rel.items():
            v[i * n + j] = F.add(v[i * n + j], c)
        rows.append(v)
    R, _ = linalg.rref(F, rows, n * n)
    return tuple(tuple(r) for r in R)


def _intersection_with(F, rows, support: list, size: int):
    """Basis of the vectors in span(rows) supported on ``support``."""
    if not rows:
        return []
    outside = [c for c in range(size) if c not in support]
    # coefficient vectors c with sum_k c_k rows[k] vanishing off the support
    Bt = [[row[c] for row in rows] for c in outside]
    cs = linalg.nullspace(F, Bt, len(rows))
    return [list(_comb(F, c, rows, support)) for c in cs]


def _comb(F, c, rows, support):
    for col in support:
        acc = F.zero
        for ck, row in zip(c, rows):
            if ck != 0 and row[col] != 0:
                acc = F.add(acc, F.mul(ck, row[col]))
        yield acc


def recognize(F: Field, n: int, rows) -> PresentedAlgebra | RawRelations:
    """Match a relation space against the skew and free shapes."""
    rows = [list(r) for r in rows]
    size = n * n
    diag = {i * n + i for i in range(n)}
    # free shape: relation space spanned by some squares
    if all(sum(1 for x in r if x != 0) == 1 and next(k for k, x in enumerate(r) if x != 0) in diag
           for r in rows):
        Z = sorted(next(k for k, x in enumerate(r) if x != 0) // n + 1 for r in rows)
        return PresentedAlgebra(F, n, "free", None, Z)
    if n >= 2:
        alpha = [[None] * n for _ in range(n)]
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                inter = _intersection_with(F, rows, [i * n + j, j * n + i], size)
                if len(inter) != 1 or inter[0][0] == 0 or inter[0][1] == 0:
                    ok = False
                    break
                a = F.div(inter[0][0], inter[0][1])
                alpha[i][j] = a
                alpha[j][i] = F.inv(a)
            if not ok:
                break
        if ok:
            Z = [i + 1 for i in range(n) if _intersection_with(F, rows, [i * n + i], size)]
            if len(rows) == n * (n - 1) // 2 + len(Z):
                return PresentedAlgebra(F, n, "skew", alpha, Z)
    R, _ = linalg.rref(F, rows, size)
    return RawRelations(F, n, tuple(tuple(r) for r in R))


def quadratic_dual(A) -> PresentedAlgebra | RawRelations:
    """The quadratic dual algebra, as a presentation when one of the shapes fits."""
    F, n = A.field, A.n
    R = [list(r) for r in relation_space(A)]
    perp = linalg.nullspace(F, R, n * n) if R else linalg.identity(F, n * n)
    P, _ = linalg.rref(F, perp, n * n)
    return recognize(F, n, P)
