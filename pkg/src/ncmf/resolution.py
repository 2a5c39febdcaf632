"""Minimal free resolutions, Hom and Ext^1 on a degree window."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import DEFAULT_WINDOW
from .errors import MixedAlgebras, WindowTooSmall
from .grmod import (
    GradedMatrix,
    ModulePresentation,
    column_to_vector,
    degreewise_map,
    module_basis,
    vector_to_column,
)

__all__ = [
    "ResolutionWindow",
    "HomSpace",
    "minimal_generators",
    "minimal_resolution_window",
    "graded_hom_space",
    "graded_ext1_dim",
]


@dataclass
class ResolutionWindow:
    """First differentials ``d_1 .. d_s`` and generator degrees of ``F_0 .. F_s``."""

    differentials: list
    betti: list
    truncated: bool
    window: int

    @property
    def ranks(self) -> list:
        return [len(b) for b in self.betti]

    def is_linear(self) -> bool:
        """Each ``F_j`` generated in degree ``j`` (relative to ``F_0`` in degree 0)."""
        return all(all(m == j for m in b) for j, b in enumerate(self.betti))


def _times_word(A, column, w):
    mono = A.monomial(w)
    return [A.multiply(a, mono) for a in column]


def minimal_generators(A, shifts, degree_spaces, candidates=None):
    """Greedy minimal generators of a graded submodule of ``(+) A(-m)``.

    ``degree_spaces`` maps e to a list of vectors spanning the submodule in
    degree e (coordinates per :func:`module_basis`).  Returns a list of
    ``(degree, column)``, lowest degree first, canonical order within a degree.
    """
    F = A.field
    gens: list = []
    for e in sorted(degree_spaces):
        size = len(module_basis(A, shifts, e))
        ech = linalg.Echelon(F, size)
        for g_deg, col in gens:
            for w in A.basis(e - g_deg):
                ech.add(column_to_vector(A, shifts, _times_word(A, col, w), e))
        for v in degree_spaces[e]:
            if ech.add(v):
                gens.append((e, vector_to_column(A, shifts, v, e)))
    return gens


def _truncated(A, shifts, N: int) -> bool:
    return any(A.dim(N + 1 - m) > 0 for m in shifts if N + 1 - m >= 0)


def minimal_resolution_window(M: ModulePresentation, steps: int,
                              N: int = DEFAULT_WINDOW) -> ResolutionWindow:
    """Minimal free resolution prefix of Coker(M.matrix), computed up to degree N."""
    A = M.over
    P = M.matrix
    F = A.field
    betti = [P.target]
    diffs: list = []
    truncated = False
    if steps < 1:
        return ResolutionWindow(diffs, betti, truncated, N)
    # step 1: minimal generators of the image, chosen among the columns of P
    spaces: dict = {}
    for t, m in enumerate(P.source):
        col = [P.entries[s][t] for s in range(P.nrows)]
        spaces.setdefault(m, []).append(column_to_vector(A, P.target, col, m))
    gens = minimal_generators(A, P.target, spaces)
    current = _gens_matrix(A, P.target, gens)
    while True:
        if current.ncols == 0:
            break
        diffs.append(current)
        betti.append(current.source)
        if len(diffs) == steps:
            break
        lo = min(current.source)
        if lo + 1 > N:
            raise WindowTooSmall(f"step {len(diffs) + 1} needs degrees above {N}")
        spaces = {}
        for e in range(lo + 1, N + 1):
            Mx, nc = degreewise_map(current, e)
            ker = linalg.nullspace(F, Mx, nc)
            if ker:
                spaces[e] = ker
        if _truncated(A, current.source, N):
            truncated = True
        gens = minimal_generators(A, current.source, spaces)
        current = _gens_matrix(A, current.source, gens)
    return ResolutionWindow(diffs, betti, truncated, N)


def _gens_matrix(A, target, gens) -> GradedMatrix:
    src = [deg for deg, _ in gens]
    rows = [[col[s] for _, col in gens] for s in range(len(target))]
    return GradedMatrix(A, target, src, rows)


@dataclass
class HomSpace:
    """Degree-0 homomorphisms, as images of the generators of the source."""

    dim: int
    basis: list  # each element: list of columns, one per generator of the source


class _Target:
    """Degreewise data of a presented module M' = Coker(P')."""

    def __init__(self, pres: ModulePresentation):
        self.A = pres.over
        self.P = pres.matrix
        self.G0 = self.P.target

    def space(self, degrees):
        """(dimension of (+) G0_m, echelon rows of (+) im(P')_m) over the slots."""
        A, F = self.A, self.A.field
        dims = [len(module_basis(A, self.G0, m)) for m in degrees]
        total = sum(dims)
        rows = []
        off = 0
        for m, k in zip(degrees, dims):
            Mx, _ = degreewise_map(self.P, m)
            # column space of Mx, embedded at offset
            for col in linalg.rref(F, linalg.transpose(Mx, 0) if Mx else [], k)[0]:
                rows.append([F.zero] * off + list(col) + [F.zero] * (total - off - k))
            off += k
        return dims, total, rows

    def cochain(self, D: GradedMatrix):
        """Matrix of h -> h . D from (+)_s G0_{m_s} to (+)_t G0_{m_t}."""
        A, F = self.A, self.A.field
        src_dims = [len(module_basis(A, self.G0, m)) for m in D.target]
        dst_dims = [len(module_basis(A, self.G0, m)) for m in D.source]
        dst_off = [sum(dst_dims[:t]) for t in range(len(dst_dims))]
        total_dst = sum(dst_dims)
        cols = []
        for s, ms in enumerate(D.target):
            for q, w in module_basis(A, self.G0, ms):
                col = [F.zero] * total_dst
                mono = A.monomial(w)
                for t, mt in enumerate(D.source):
                    a = D.entries[s][t]
                    if not a.terms:
                        continue
                    p = A.multiply(mono, a)
                    if not p.terms:
                        continue
                    image = [A.zero() for _ in self.G0]
                    image[q] = p
                    v = column_to_vector(A, self.G0, image, mt)
                    for i, c in enumerate(v):
                        if c != 0:
                            col[dst_off[t] + i] = F.add(col[dst_off[t] + i], c)
                cols.append(col)
        return [[col[i] for col in cols] for i in range(total_dst)], sum(src_dims)


def _rank_mod(F, M, ncols, W):
    """rank of the composite (M followed by the projection killing span W)."""
    if not W:
        return linalg.rank(F, M) if M and ncols else 0
    cols = linalg.transpose(M, ncols) if M else [[] for _ in range(ncols)]
    return linalg.rank(F, list(cols) + list(W)) - len(W) if (cols or W) else 0


def graded_hom_space(M: ModulePresentation, Mp: ModulePresentation,
                     N: int = DEFAULT_WINDOW) -> HomSpace:
    """Basis of Hom(M, M')_0 for presented modules over the same algebra."""
    if M.over != Mp.over:
        raise MixedAlgebras("modules over different algebras")
    A = M.over
    F = A.field
    T = _Target(Mp)
    P = M.matrix
    F0 = P.target
    d0, n0 = T.cochain(P)
    _, total0, W0 = T.space(F0)
    _, total1, W1 = T.space(P.source)
    # h in V0 with d0 h in W1: nullspace of [d0 | W1^T]
    Wt = linalg.transpose(W1, total1) if W1 else [[] for _ in range(total1)]
    aug = [list(a) + list(b) for a, b in zip(d0, Wt)] if total1 else []
    ker = linalg.nullspace(F, aug, n0 + len(W1)) if total1 else linalg.identity(F, n0)
    ech = linalg.Echelon(F, total0)
    for w in W0:
        ech.add(w)
    basis = []
    for v in ker:
        h = v[:n0]
        if ech.add(h):
            cols = []
            off = 0
            for m in F0:
                k = len(module_basis(A, T.G0, m))
                cols.append(vector_to_column(A, T.G0, h[off:off + k], m))
                off += k
            basis.append(cols)
    return HomSpace(len(basis), basis)


def graded_ext1_dim(M: ModulePresentation, Mp: ModulePresentation,
                    N: int = DEFAULT_WINDOW) -> int:
    """dim Ext^1(M, M')_0 from a two-step minimal resolution of M.

    Second syzygies are found in degrees up to N; generators above N are
    assumed absent.  WindowTooSmall is raised when N cannot reach the first
    degree where second syzygies may live.
    """
    if M.over != Mp.over:
        raise MixedAlgebras("modules over different algebras")
    F = M.over.field
    if M.matrix.ncols and min(M.matrix.source) + 1 > N:
        raise WindowTooSmall(f"window {N} too small for second syzygies")
    res = minimal_resolution_window(M, 2, N)
    T = _Target(Mp)
    d1 = res.differentials[0] if res.differentials else None
    if d1 is None:
        return 0
    d2 = res.differentials[1] if len(res.differentials) > 1 else None
    _, total1, W1 = T.space(d1.source)
    D0, n0 = T.cochain(d1)
    r0 = _rank_mod(F, D0, n0, W1)
    if d2 is not None:
        _, total2, W2 = T.space(d2.source)
        D1, n1 = T.cochain(d2)
        r1 = _rank_mod(F, D1, n1, W2)
    else:
        r1 = 0
    return total1 - r1 - len(W1) - r0
