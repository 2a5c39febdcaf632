"""Graded free modules, graded matrices and degreewise linear algebra.

A graded free right module ``F = (+)_s R(-m_s)`` is described by its shift
vector ``(m_1, ..., m_r)``.  A :class:`GradedMatrix` acts on columns by left
multiplication; entry ``(s, t)`` is homogeneous of degree
``source[t] - target[s]``.  Everything infinite is truncated to a window of
internal degrees ``0..N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import linalg
from .algebra import (
    DEFAULT_WINDOW,
    AlgebraElement,
    NormalElement,
    PresentedAlgebra,
    ideal_echelon,
)
from .errors import MixedAlgebras, NoSolution, NotInvertible, ShiftMismatch

__all__ = [
    "QuotientAlgebra",
    "GradedMatrix",
    "ModulePresentation",
    "ComplexWindow",
    "ExactnessReport",
    "compose",
    "degreewise_map",
    "kernel_window",
    "solve_preimage",
    "exactness_window",
    "chain_map_space",
    "coker_bijective_window",
    "graded_inverse",
    "module_basis",
    "column_to_vector",
    "vector_to_column",
]


class QuotientAlgebra:
    """A = S/(f) with canonical representatives reduced against the ideal.

    Elements of A are :class:`AlgebraElement` objects whose words are normal
    words of S lying outside the pivot columns of the ideal's echelon basis.
    """

    def __init__(self, base: PresentedAlgebra, f):
        if isinstance(f, NormalElement):
            self.normal = f
            f = f.f
        else:
            self.normal = None
        if f.algebra != base:
            raise MixedAlgebras("f is not an element of the base algebra")
        self.base = base
        self.f = f
        self.field = base.field
        self.n = base.n
        self._ech: dict = {}
        self._basis: dict = {}
        self._index: dict = {}

    def __eq__(self, other):
        return isinstance(other, QuotientAlgebra) and self.base == other.base and self.f == other.f

    def __hash__(self):
        return hash((self.base, self.f))

    def __repr__(self):
        return f"QuotientAlgebra({self.base!r}, f={self.f})"

    @property
    def root(self) -> PresentedAlgebra:
        return self.base

    def echelon(self, e: int):
        try:
            return self._ech[e]
        except KeyError:
            ech = ideal_echelon(self.base, self.f, e)
            self._ech[e] = ech
            return ech

    def basis(self, e: int) -> list:
        try:
            return self._basis[e]
        except KeyError:
            piv = set(self.echelon(e).pivots) if e >= 0 else set()
            words = [w for i, w in enumerate(self.base.basis(e)) if i not in piv]
            self._basis[e] = words
            return words

    def index(self, e: int) -> dict:
        try:
            return self._index[e]
        except KeyError:
            idx = {w: i for i, w in enumerate(self.basis(e))}
            self._index[e] = idx
            return idx

    def dim(self, e: int) -> int:
        return len(self.basis(e))

    def reduce(self, s: AlgebraElement) -> AlgebraElement:
        """Canonical representative in A of an element of S."""
        if s.algebra is self:
            return s
        if s.algebra != self.base:
            raise MixedAlgebras("element is not in the base algebra")
        if not s.terms:
            return AlgebraElement(self, s.degree, {})
        ech = self.echelon(s.degree)
        if not ech.rows:
            return AlgebraElement(self, s.degree, dict(s.terms))
        v = ech.reduce(self.base.coords(s))
        words = self.base.basis(s.degree)
        return AlgebraElement(self, s.degree, {words[i]: c for i, c in enumerate(v) if c != 0})

    def lift(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra is self.base or a.algebra == self.base:
            return a
        if a.algebra != self:
            raise MixedAlgebras("element is not in this quotient")
        return AlgebraElement(self.base, a.degree, dict(a.terms))

    def element(self, terms, degree: int | None = None) -> AlgebraElement:
        return self.reduce(self.base.element(terms, degree))

    def monomial(self, w: tuple, coeff=None) -> AlgebraElement:
        return self.reduce(self.base.monomial(w, coeff))

    def zero(self, degree: int = 0) -> AlgebraElement:
        return AlgebraElement(self, degree, {})

    def one(self) -> AlgebraElement:
        return self.reduce(self.base.one())

    def scalar(self, c) -> AlgebraElement:
        return self.reduce(self.base.scalar(c))

    def gen(self, i: int) -> AlgebraElement:
        return self.reduce(self.base.gen(i))

    def gens(self) -> list:
        return [self.gen(i) for i in range(1, self.n + 1)]

    def linear_form(self, coeffs) -> AlgebraElement:
        return self.reduce(self.base.linear_form(coeffs))

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        return self.reduce(self.base.multiply(self.lift(a), self.lift(b)))

    def coords(self, a: AlgebraElement) -> list:
        idx = self.index(a.degree)
        v = [self.field.zero] * len(idx)
        for w, c in a.terms.items():
            v[idx[w]] = c
        return v

    def from_coords(self, v, e: int) -> AlgebraElement:
        return AlgebraElement(self, e, {w: c for w, c in zip(self.basis(e), v) if c != 0})


def _as(algebra, a: AlgebraElement) -> AlgebraElement:
    """Move ``a`` into ``algebra`` (reduce into a quotient, or check membership)."""
    if a.algebra is algebra or a.algebra == algebra:
        return a
    if isinstance(algebra, QuotientAlgebra) and a.algebra == algebra.base:
        return algebra.reduce(a)
    raise MixedAlgebras("element belongs to another algebra")


class GradedMatrix:
    """A degree-0 map between graded free modules, given by left multiplication."""

    def __init__(self, algebra, target: Sequence[int], source: Sequence[int], entries):
        self.algebra = algebra
        self.target = tuple(int(m) for m in target)
        self.source = tuple(int(m) for m in source)
        rows = []
        if len(entries) != len(self.target):
            raise ShiftMismatch(f"{len(entries)} rows for {len(self.target)} target shifts")
        for s, row in enumerate(entries):
            if len(row) != len(self.source):
                raise ShiftMismatch(f"row {s} has {len(row)} entries for {len(self.source)} columns")
            out = []
            for t, a in enumerate(row):
                deg = self.source[t] - self.target[s]
                a = _as(algebra, a)
                if a.terms:
                    if a.degree != deg:
                        raise ShiftMismatch(
                            f"entry ({s},{t}) has degree {a.degree}, shifts require {deg}"
                        )
                else:
                    a = AlgebraElement(algebra, max(deg, 0), {})
                out.append(a)
            rows.append(tuple(out))
        self.entries = tuple(rows)
        self._dw: dict = {}

    @property
    def nrows(self) -> int:
        return len(self.target)

    @property
    def ncols(self) -> int:
        return len(self.source)

    @property
    def field(self):
        return self.algebra.field

    def __getitem__(self, st):
        s, t = st
        return self.entries[s][t]

    def __eq__(self, other):
        return (
            isinstance(other, GradedMatrix)
            and self.target == other.target
            and self.source == other.source
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.target, self.source, self.entries))

    def __repr__(self):
        rows = [[str(a) for a in row] for row in self.entries]
        return f"GradedMatrix(target={list(self.target)}, source={list(self.source)}, {rows})"

    # constructors
    @classmethod
    def identity(cls, algebra, shifts) -> "GradedMatrix":
        r = len(shifts)
        one = algebra.one()
        return cls(algebra, shifts, shifts,
                   [[one if i == j else algebra.zero() for j in range(r)] for i in range(r)])

    @classmethod
    def scalar_diagonal(cls, f: AlgebraElement, shifts, algebra=None) -> "GradedMatrix":
        """``f * E`` as a map ``F(-d) -> F``."""
        algebra = algebra or f.algebra
        f = _as(algebra, f)
        r = len(shifts)
        src = [m + f.degree for m in shifts]
        return cls(algebra, shifts, src,
                   [[f if i == j else algebra.zero() for j in range(r)] for i in range(r)])

    @classmethod
    def zero(cls, algebra, target, source) -> "GradedMatrix":
        return cls(algebra, target, source, [[algebra.zero() for _ in source] for _ in target])

    @classmethod
    def from_scalars(cls, algebra, target, source, values) -> "GradedMatrix":
        """Matrix with scalar entries; positions with unequal shifts must be zero."""
        F = algebra.field
        rows = []
        for s, row in enumerate(values):
            out = []
            for t, v in enumerate(row):
                v = F.convert(v)
                if v != 0 and target[s] != source[t]:
                    raise ShiftMismatch(f"scalar entry ({s},{t}) between unequal shifts")
                out.append(algebra.scalar(v) if v != 0 else algebra.zero())
            rows.append(out)
        return cls(algebra, target, source, rows)

    # structure
    def map_entries(self, fn, algebra=None) -> "GradedMatrix":
        algebra = algebra or self.algebra
        return GradedMatrix(algebra, self.target, self.source,
                            [[fn(a) for a in row] for row in self.entries])

    def shifted(self, k: int) -> "GradedMatrix":
        """The same matrix viewed as a map ``F(-k) -> G(-k)``."""
        return GradedMatrix(self.algebra, [m + k for m in self.target],
                            [m + k for m in self.source], self.entries)

    def scale(self, c) -> "GradedMatrix":
        return self.map_entries(lambda a: a.scale(c))

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.target != other.target or self.source != other.source:
            raise ShiftMismatch("adding matrices of different shapes")
        return GradedMatrix(self.algebra, self.target, self.source,
                            [[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return self + other.scale(-1)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        return compose(self, other)

    def reduce_to(self, algebra) -> "GradedMatrix":
        """Image of this matrix over a quotient of its algebra."""
        return GradedMatrix(algebra, self.target, self.source,
                            [[_as(algebra, a) for a in row] for row in self.entries])

    def lift_to(self, algebra) -> "GradedMatrix":
        return GradedMatrix(algebra, self.target, self.source,
                            [[self.algebra.lift(a) for a in row] for row in self.entries])

    def transpose_with(self, fn, algebra) -> "GradedMatrix":
        """Transpose with entries mapped by ``fn``; shifts negated (dual module)."""
        return GradedMatrix(algebra, [-m for m in self.source], [-m for m in self.target],
                            [[fn(self.entries[s][t]) for s in range(self.nrows)]
                             for t in range(self.ncols)])

    def submatrix(self, rows, cols) -> "GradedMatrix":
        return GradedMatrix(self.algebra, [self.target[s] for s in rows],
                            [self.source[t] for t in cols],
                            [[self.entries[s][t] for t in cols] for s in rows])

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.entries for a in row)

    def apply(self, column: Sequence[AlgebraElement]) -> list:
        """Image of a homogeneous column vector."""
        if len(column) != self.ncols:
            raise ShiftMismatch("column length does not match source rank")
        A = self.algebra
        out = []
        for s in range(self.nrows):
            acc = None
            for t in range(self.ncols):
                p = A.multiply(self.entries[s][t], _as(A, column[t]))
                if p.terms:
                    acc = p if acc is None else acc + p
            out.append(acc if acc is not None else A.zero())
        return out

    def degreewise(self, e: int):
        return degreewise_map(self, e)


def block_diagonal(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    A = a.algebra
    rows = [list(r) + [A.zero()] * b.ncols for r in a.entries]
    rows += [[A.zero()] * a.ncols + list(r) for r in b.entries]
    return GradedMatrix(A, a.target + b.target, a.source + b.source, rows)


def compose(phi: GradedMatrix, psi: GradedMatrix) -> GradedMatrix:
    """The product ``phi * psi`` (first psi, then phi)."""
    if phi.source != psi.target:
        raise ShiftMismatch(f"source {list(phi.source)} != target {list(psi.target)}")
    if phi.algebra != psi.algebra:
        raise MixedAlgebras("matrices over different algebras")
    A = phi.algebra
    rows = []
    for s in range(phi.nrows):
        row = []
        for u in range(psi.ncols):
            acc = None
            for t in range(phi.ncols):
                a, b = phi.entries[s][t], psi.entries[t][u]
                if a.terms and b.terms:
                    p = A.multiply(a, b)
                    if p.terms:
                        acc = p if acc is None else acc + p
            row.append(acc if acc is not None else A.zero())
        rows.append(row)
    return GradedMatrix(A, phi.target, psi.source, rows)


def module_basis(algebra, shifts: Sequence[int], e: int) -> list:
    """Basis ``(slot, word)`` of the degree-e part of ``(+) R(-m_s)``."""
    return [(s, w) for s, m in enumerate(shifts) for w in algebra.basis(e - m)]


def column_to_vector(algebra, shifts, column, e: int) -> list:
    F = algebra.field
    v = []
    for s, m in enumerate(shifts):
        a = _as(algebra, column[s])
        if a.terms and a.degree != e - m:
            raise ShiftMismatch(f"slot {s} has degree {a.degree}, expected {e - m}")
        if e - m < 0:
            continue
        if a.terms:
            v.extend(algebra.coords(a))
        else:
            v.extend([F.zero] * algebra.dim(e - m))
    return v


def vector_to_column(algebra, shifts, v, e: int) -> list:
    col = []
    pos = 0
    for m in shifts:
        k = algebra.dim(e - m) if e - m >= 0 else 0
        col.append(algebra.from_coords(v[pos:pos + k], e - m) if k else algebra.zero(max(e - m, 0)))
        pos += k
    return col


def degreewise_map(phi: GradedMatrix, e: int):
    """Field matrix of phi on internal degree e (rows: target basis, cols: source basis)."""
    try:
        return phi._dw[e]
    except KeyError:
        pass
    A = phi.algebra
    F = A.field
    tdims = [A.dim(e - m) if e - m >= 0 else 0 for m in phi.target]
    offsets = []
    pos = 0
    for k in tdims:
        offsets.append(pos)
        pos += k
    nrows = pos
    cols = []
    for t, m in enumerate(phi.source):
        if e - m < 0:
            continue
        for w in A.basis(e - m):
            mono = A.monomial(w)
            col = [F.zero] * nrows
            for s in range(phi.nrows):
                a = phi.entries[s][t]
                if not a.terms or tdims[s] == 0:
                    continue
                p = A.multiply(a, mono)
                if p.terms:
                    idx = A.index(p.degree)
                    for word, c in p.terms.items():
                        col[offsets[s] + idx[word]] = c
            cols.append(col)
    M = [[col[i] for col in cols] for i in range(nrows)]
    phi._dw[e] = (M, len(cols))
    return phi._dw[e]


def _matrix(phi, e):
    return degreewise_map(phi, e)[0]


def _ncols(phi, e):
    return degreewise_map(phi, e)[1]


def kernel_window(phi: GradedMatrix, N: int = DEFAULT_WINDOW) -> list:
    """``[(e, basis of ker phi_e), ...]`` for e = 0..N, vectors in source coordinates."""
    F = phi.field
    out = []
    for e in range(N + 1):
        M, nc = degreewise_map(phi, e)
        out.append((e, linalg.nullspace(F, M, nc)))
    return out


def image_rank(phi: GradedMatrix, e: int) -> int:
    M, _ = degreewise_map(phi, e)
    return linalg.rank(phi.field, M)


def solve_preimage(phi: GradedMatrix, w: Sequence[AlgebraElement], degree: int | None = None):
    """Find v with ``phi v = w``; returns ``(v, unique)`` or raises NoSolution.

    ``degree`` is the internal degree of w; it is inferred from a nonzero entry.
    """
    A = phi.algebra
    if len(w) != phi.nrows:
        raise ShiftMismatch("right-hand side has the wrong length")
    w = [_as(A, a) for a in w]
    if degree is None:
        nz = [(s, a) for s, a in enumerate(w) if a.terms]
        if not nz:
            raise ValueError("degree needed for a zero right-hand side")
        s, a = nz[0]
        degree = a.degree + phi.target[s]
    M, nc = degreewise_map(phi, degree)
    b = column_to_vector(A, phi.target, w, degree)
    x = linalg.solve(phi.field, M, b, nc)
    if x is None:
        raise NoSolution(f"no preimage in degree {degree}")
    unique = linalg.rank(phi.field, M) == nc
    return vector_to_column(A, phi.source, x, degree), unique


@dataclass
class ModulePresentation:
    """The cokernel of ``matrix`` (a right module over ``over``)."""

    over: object
    matrix: GradedMatrix

    def __post_init__(self):
        if self.matrix.algebra != self.over:
            self.matrix = self.matrix.reduce_to(self.over)

    @property
    def generators(self) -> tuple:
        return self.matrix.target

    def hilbert(self, N: int = DEFAULT_WINDOW) -> list:
        """dim of the module in degrees 0..N."""
        A = self.over
        out = []
        for e in range(N + 1):
            total = sum(A.dim(e - m) for m in self.matrix.target if e - m >= 0)
            out.append(total - image_rank(self.matrix, e))
        return out


@dataclass
class ComplexWindow:
    """Maps ``phi^i : F^{i+1} -> F^i`` for i in a finite index range."""

    maps: dict
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        for i, phi in self.maps.items():
            nxt = self.maps.get(i + 1)
            if nxt is not None and phi.source != nxt.target:
                raise ShiftMismatch(f"phi^{i} source != phi^{i + 1} target")

    @property
    def indices(self) -> list:
        return sorted(self.maps)


@dataclass
class ExactnessReport:
    exact: bool
    composite_zero: bool
    defects: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.exact


def exactness_window(C: ComplexWindow, i: int, N: int | None = None) -> ExactnessReport:
    """Exactness of ``F^{i+2} -> F^{i+1} -> F^i`` in degrees 0..N.

    ``defects[e]`` is ``dim ker(phi^i)_e - dim im(phi^{i+1})_e``.
    """
    if i not in C.maps or i + 1 not in C.maps:
        raise KeyError(f"positions {i} and {i + 1} are both needed")
    N = C.window if N is None else N
    phi, psi = C.maps[i], C.maps[i + 1]
    if phi.source != psi.target:
        raise ShiftMismatch(f"phi^{i} source != phi^{i + 1} target")
    F = phi.field
    comp = compose(phi, psi)
    zero = comp.is_zero()
    defects = {}
    for e in range(N + 1):
        M, nc = degreewise_map(phi, e)
        ker = nc - linalg.rank(F, M)
        im = image_rank(psi, e)
        if ker != im:
            defects[e] = ker - im
    return ExactnessReport(zero and not defects, zero, defects)


def chain_map_space(P: GradedMatrix, Q: GradedMatrix) -> list:
    """Basis of degree-0 pairs ``(U, V)`` with ``U P = Q V``.

    ``P : F1 -> F0`` and ``Q : G1 -> G0``; ``U : F0 -> G0`` and ``V : F1 -> G1``.
    """
    A = P.algebra
    if Q.algebra != A:
        raise MixedAlgebras("presentations over different algebras")
    F = A.field
    F0, F1, G0, G1 = P.target, P.source, Q.target, Q.source
    unknowns = []  # (which, s, t, word)
    for s, g in enumerate(G0):
        for t, m in enumerate(F0):
            for w in A.basis(m - g):
                unknowns.append(("U", s, t, w))
    for s, g in enumerate(G1):
        for t, m in enumerate(F1):
            for w in A.basis(m - g):
                unknowns.append(("V", s, t, w))
    # equation coordinates: entry (s, t) of U P - Q V in degree F1[t] - G0[s]
    eq_offset = {}
    pos = 0
    for s, g in enumerate(G0):
        for t, m in enumerate(F1):
            eq_offset[(s, t)] = pos
            pos += A.dim(m - g) if m - g >= 0 else 0
    neq = pos
    cols = []
    for kind, s, t, w in unknowns:
        col = [F.zero] * neq
        mono = A.monomial(w)
        if kind == "U":
            # U_{s t} contributes w * P_{t u} to entry (s, u)
            for u in range(len(F1)):
                p = A.multiply(mono, P.entries[t][u])
                for word, c in p.terms.items():
                    col[eq_offset[(s, u)] + A.index(p.degree)[word]] = c
        else:
            # V_{s t} contributes -Q_{k s} * w to entry (k, t)
            for k in range(len(G0)):
                p = A.multiply(Q.entries[k][s], mono)
                for word, c in p.terms.items():
                    i = eq_offset[(k, t)] + A.index(p.degree)[word]
                    col[i] = F.sub(col[i], c)
        cols.append(col)
    M = [[col[i] for col in cols] for i in range(neq)]
    basis = linalg.nullspace(F, M, len(unknowns)) if unknowns else []
    out = []
    for vec in basis:
        U = [[A.zero() for _ in F0] for _ in G0]
        V = [[A.zero() for _ in F1] for _ in G1]
        for c, (kind, s, t, w) in zip(vec, unknowns):
            if c == 0:
                continue
            target = U if kind == "U" else V
            target[s][t] = target[s][t] + A.monomial(w, c)
        out.append((GradedMatrix(A, G0, F0, U), GradedMatrix(A, G1, F1, V)))
    return out


def combine(pairs: list, coeffs: list):
    """Linear combination of chain-map pairs."""
    U, V = None, None
    for (u, v), c in zip(pairs, coeffs):
        if c == 0:
            continue
        U = u.scale(c) if U is None else U + u.scale(c)
        V = v.scale(c) if V is None else V + v.scale(c)
    if U is None:
        u, v = pairs[0]
        return u.scale(0), v.scale(0)
    return U, V


def coker_bijective_window(P: GradedMatrix, Q: GradedMatrix, U: GradedMatrix,
                           N: int = DEFAULT_WINDOW) -> bool:
    """Does U induce a bijection Coker P -> Coker Q on degrees 0..N?"""
    A = P.algebra
    F = A.field
    for e in range(N + 1):
        dimF0 = sum(A.dim(e - m) for m in P.target if e - m >= 0)
        dimG0 = sum(A.dim(e - m) for m in Q.target if e - m >= 0)
        rP, rQ = image_rank(P, e), image_rank(Q, e)
        if dimF0 - rP != dimG0 - rQ:
            return False
        Mu, _ = degreewise_map(U, e)
        Mq, _ = degreewise_map(Q, e)
        if dimG0 == 0:
            continue
        joined = [list(a) + list(b) for a, b in zip(Mu, Mq)]
        if linalg.rank(F, joined) != dimG0:
            return False
    return True


def degree_zero_part(M: GradedMatrix):
    """Scalar matrix of the degree-0 entries (zero where shifts differ)."""
    F = M.field
    return [[a.scalar_value() if a.degree == 0 else F.zero for a in row] for row in M.entries]


def graded_inverse(M: GradedMatrix) -> GradedMatrix:
    """Inverse of a square degree-0 graded matrix ``F -> F``.

    M = M0 + N with M0 scalar and N of positive degree; N is nilpotent
    because entry degrees are bounded by the spread of the shifts.
    """
    if sorted(M.target) != sorted(M.source) or M.nrows != M.ncols:
        raise NotInvertible("not a square map between equal shift vectors")
    A = M.algebra
    F = A.field
    M0 = degree_zero_part(M)
    inv0 = linalg.inverse(F, M0)
    if inv0 is None:
        raise NotInvertible("degree-zero part is singular")
    I0 = GradedMatrix.from_scalars(A, M.source, M.target, inv0)
    Nil = M - GradedMatrix.from_scalars(A, M.target, M.source, M0)
    if Nil.is_zero():
        return I0
    step = compose(I0, Nil).scale(-1)  # -(M0^-1 N) : source -> source
    term = GradedMatrix.identity(A, M.source)
    total = term
    spread = (max(M.source) - min(M.source)) if M.source else 0
    for _ in range(spread + 1):
        term = compose(step, term)
        if term.is_zero():
            break
        total = total + term
    return compose(total, I0)
