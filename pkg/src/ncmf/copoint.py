"""Co-point modules over skew exterior algebras and the factorizations they give.

The skew context is ``T = Skew(alpha)``, ``S = T/(x1^2, .., x_{n-1}^2)``,
``f = x_n^2`` and ``A = S/(f)``, the skew exterior algebra.  A point p gives
the cyclic module ``N_p = A / l_p A``.  The map tau is read off from the
kernel of left multiplication by ``l_p`` on ``A_1``; iterating it yields the
orbit whose linear forms become the components of a rank-one factorization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .algebra import (
    DEFAULT_WINDOW,
    AlgebraElement,
    NormalElement,
    PresentedAlgebra,
    normalizing_automorphism,
    skew_alpha,
)
from .errors import (
    NoSolution,
    NotCopointHere,
    PointOnXn,
    VerificationFailed,
)
from .grmod import GradedMatrix, ModulePresentation
from .nmf import (
    NMF,
    PeriodResult,
    nmf_coker,
    nmf_complete,
    nmf_period,
    nmf_rescale,
    nmf_verify,
    quotient_algebra,
)
from .resolution import ResolutionWindow, graded_ext1_dim, minimal_resolution_window
from .scalar import Field

__all__ = [
    "HypersurfaceContext",
    "SkewContext",
    "Point",
    "CopointOrbit",
    "ExtensionResult",
    "build_context",
    "square_zero_context",
    "tau_step",
    "is_copoint",
    "nmf_from_point",
    "build_extension_nmf",
    "point_module",
    "point_ext1_dim",
    "orbit_certificate",
]


class HypersurfaceContext:
    """An algebra S, a regular normal f of degree 2 and ``A = S/(f)``."""

    def __init__(self, S: PresentedAlgebra, f: NormalElement):
        if f.d != 2:
            raise ValueError("points need f of degree 2")
        self.S = S
        self.f = f
        self.A = quotient_algebra(f)
        self.field = S.field
        self.n = S.n

    def form(self, coords, algebra=None) -> AlgebraElement:
        return (algebra or self.S).linear_form(coords)


class SkewContext(HypersurfaceContext):
    """The skew exterior context built from an alpha matrix."""

    def __init__(self, alpha, field: Field, N: int = DEFAULT_WINDOW):
        n = len(alpha)
        self.alpha = tuple(tuple(r) for r in alpha)
        self.T = PresentedAlgebra.skew(field, alpha)
        S = PresentedAlgebra.skew(field, alpha, range(1, n))
        xn = S.gen(n)
        super().__init__(S, normalizing_automorphism(S, S.multiply(xn, xn), N))

    def exterior(self) -> PresentedAlgebra:
        """A as a presentation in its own right (all squares zero)."""
        return PresentedAlgebra.exterior(self.field, self.n, self.alpha)


def build_context(alpha, field: Field, N: int = DEFAULT_WINDOW) -> SkewContext:
    """``alpha``: full n x n matrix, or ``{(i, j): value}`` over 1-based i < j."""
    if isinstance(alpha, dict):
        n = max(max(k) for k in alpha) if alpha else 0
        alpha = skew_alpha(field, n, alpha)
    return SkewContext(alpha, field, N)


def square_zero_context(field: Field, alpha=2, N: int = DEFAULT_WINDOW) -> HypersurfaceContext:
    """``S = k<x,y>/(x^2, y^2)`` with ``f = alpha xy + yx``."""
    S = PresentedAlgebra.free(field, 2, [1, 2])
    x, y = S.gens()
    f = S.multiply(x, y).scale(field.convert(alpha)) + S.multiply(y, x)
    return HypersurfaceContext(S, normalizing_automorphism(S, f, N))


@dataclass(frozen=True)
class Point:
    """A projective point, normalized so the last nonzero coordinate is 1."""

    field: Field
    coords: tuple

    @classmethod
    def make(cls, field: Field, coords) -> "Point":
        vals = [field.convert(c) for c in coords]
        nz = [c for c in vals if c != 0]
        if not nz:
            raise ValueError("the zero vector is not a point")
        inv = field.inv(nz[-1])
        return cls(field, tuple(field.mul(c, inv) for c in vals))

    def __str__(self):
        return "(" + ":".join(self.field.fmt(c) for c in self.coords) + ")"

    def to_json(self) -> dict:
        return {"coords": [self.field.fmt(c) for c in self.coords]}


def _as_point(C: HypersurfaceContext, p) -> Point:
    return p if isinstance(p, Point) else Point.make(C.field, p)


def _left_mult_matrix(A, a: AlgebraElement, e: int):
    """Matrix of ``v -> a v`` from ``A_e`` to ``A_{e + deg a}``."""
    rows_dim = A.dim(e + a.degree)
    cols = [A.coords(A.multiply(a, A.monomial(w))) for w in A.basis(e)]
    return linalg.transpose(cols, rows_dim) if cols else [], len(cols)


def tau_step(C: HypersurfaceContext, p, N: int = DEFAULT_WINDOW) -> Point:
    """The point q with ``ker(l_p .) = l_q A``, certified in degrees up to N."""
    p = _as_point(C, p)
    A, F = C.A, C.field
    lp = C.form(p.coords, A)
    M, nc = _left_mult_matrix(A, lp, 1)
    ker = linalg.nullspace(F, M, nc) if M else linalg.identity(F, nc)
    if len(ker) != 1:
        raise NotCopointHere(f"kernel of l_p on degree 1 has dimension {len(ker)} at {p}")
    lq = A.from_coords(ker[0], 1)
    for e in range(2, N + 1):
        if A.dim(e) == 0:
            break
        Me, ne = _left_mult_matrix(A, lp, e)
        kdim = ne - (linalg.rank(F, Me) if Me else 0)
        Qe, _ = _left_mult_matrix(A, lq, e - 1)
        img = linalg.rank(F, Qe) if Qe else 0
        if kdim != img:
            raise NotCopointHere(f"kernel of l_p in degree {e} is not generated by l_tau(p)")
    return Point.make(F, [lq.coeff((j,)) for j in range(C.n)])


@dataclass
class CopointOrbit:
    """Points ``p_0 .. p_L``, their forms in S and scalars ``l_i l_{i+1} = c_i f``."""

    points: list
    forms: list
    scalars: list

    @property
    def period(self) -> int | None:
        for l in range(1, len(self.points)):
            if self.points[l] == self.points[0]:
                return l
        return None


def _ratio_to_f(C: HypersurfaceContext, prod: AlgebraElement):
    """c with ``prod = c f`` in S, or None when prod is not a multiple of f."""
    f = C.f.f
    if not prod.terms:
        return C.field.zero
    w, c = next(iter(f.terms.items()))
    lam = C.field.div(prod.coeff(w), c)
    return lam if prod == f.scale(lam) else None


def is_copoint(C: HypersurfaceContext, p, L: int = 6, N: int = DEFAULT_WINDOW):
    """Iterate tau L times.  Returns ``(ok, orbit)``; the orbit stops at a failure."""
    S = C.S
    pts = [_as_point(C, p)]
    ok = True
    for _ in range(L):
        try:
            pts.append(tau_step(C, pts[-1], N))
        except NotCopointHere:
            ok = False
            break
    forms = [C.form(q.coords) for q in pts]
    scalars = [_ratio_to_f(C, S.multiply(a, b)) for a, b in zip(forms, forms[1:])]
    return ok, CopointOrbit(pts, forms, scalars)


def _point_nmf(C: HypersurfaceContext, p, L: int, N: int):
    point = _as_point(C, p)
    ok, orbit = is_copoint(C, point, L, N)
    if not ok:
        raise NotCopointHere(f"tau orbit of {point} breaks after {len(orbit.points) - 1} steps")
    if isinstance(C, SkewContext):
        for q in orbit.points:
            if q.coords[-1] == 0:
                raise PointOnXn(f"orbit point {q} lies on x{C.n} = 0")
    for c in orbit.scalars:
        if c is None or c == 0:
            raise PointOnXn("consecutive orbit forms do not multiply to a nonzero multiple of f")
    S = C.S
    forms = list(orbit.forms)
    if not isinstance(p, Point):
        forms[0] = C.form(p)
    mats = {i: GradedMatrix(S, (i,), (i + 1,), [[a]]) for i, a in enumerate(forms)}
    phi, _ = nmf_rescale(mats, C.f, N=N)
    return phi, orbit


def nmf_from_point(C: HypersurfaceContext, p, L: int = 8, N: int = DEFAULT_WINDOW,
                   seed=0, trials: int = 16):
    """Rank-one factorization with cokernel ``N_p``, plus its period.

    When p is given as raw coordinates (not a :class:`Point`), ``Phi^0`` is
    the form with exactly those coefficients.  The period is the length of
    the projective orbit, confirmed by an isomorphism certificate.
    """
    phi, orbit = _point_nmf(C, p, L, N)
    l = orbit.period
    if l is None:
        return phi, PeriodResult(None, None, None, N, L)
    pr = nmf_period(phi, max_l=l, N=N, seed=seed, trials=trials)
    if pr.period != l:
        raise VerificationFailed(f"orbit closes after {l} steps but no isomorphism was certified")
    return phi, pr


@dataclass
class ExtensionResult:
    nmf: NMF
    nonsplit: bool
    linear: bool
    resolution: ResolutionWindow


def _slot_system(S, a: AlgebraElement, b: AlgebraElement):
    """Matrix of ``(u, u') -> u b + a u'`` from ``S_1 x S_1`` to ``S_2``."""
    cols = []
    for x in S.gens():
        cols.append(S.coords(S.multiply(x, b)))
    for x in S.gens():
        cols.append(S.coords(S.multiply(a, x)))
    return linalg.transpose(cols, S.dim(2))


def _pair_vector(S, u, v):
    return S.coords(u) + S.coords(v)


def build_extension_nmf(C: HypersurfaceContext, points, N: int = DEFAULT_WINDOW, seed=0,
                        trials: int = 16, steps: int = 8) -> ExtensionResult:
    """Block upper-triangular factorization glued from the point factorizations.

    Superdiagonal slots are solved first (a linear system per slot) and a
    random solution outside the split locus is preferred; higher slots are
    then linear given the lower ones.  ``nonsplit`` is False when every
    superdiagonal solution was forced into the split locus.
    """
    S, F = C.S, C.field
    pieces = [_point_nmf(C, p, 2, N)[0] for p in points]
    r = len(pieces)
    a = [ph.phi0.entries[0][0] for ph in pieces]
    b = [ph.phi1.entries[0][0] for ph in pieces]
    n = S.n
    for trial in range(trials + 1):
        rng = random.Random(f"{seed}:ext:{trial}")
        U = [[None] * r for _ in range(r)]
        V = [[None] * r for _ in range(r)]
        nonsplit = False
        failed = False
        for delta in range(1, r):
            for k in range(r - delta):
                l = k + delta
                M = _slot_system(S, a[k], b[l])
                rhs = S.zero(2)
                for m in range(k + 1, l):
                    rhs = rhs - S.multiply(U[k][m], V[m][l])
                sol = linalg.solve(F, M, S.coords(rhs), 2 * n)
                if sol is None:
                    failed = True
                    break
                ker = linalg.nullspace(F, M, 2 * n)
                if trial == trials:
                    ker = []  # last resort: the particular (split when delta = 1) solution
                split = linalg.Echelon(F, 2 * n)
                if delta == 1:
                    split.add(_pair_vector(S, a[l], -b[k]))
                    split.add(_pair_vector(S, -a[k], b[l]))
                vec = sol
                for _ in range(trials if ker else 1):
                    coeffs = [F.random_element(rng) for _ in ker]
                    vec = list(sol)
                    for c, kv in zip(coeffs, ker):
                        vec = [F.add(x, F.mul(c, y)) for x, y in zip(vec, kv)]
                    if delta > 1 or not split.contains(vec):
                        break
                if delta == 1 and not split.contains(vec):
                    nonsplit = True
                U[k][l] = S.from_coords(vec[:n], 1)
                V[k][l] = S.from_coords(vec[n:], 1)
            if failed:
                break
        if not failed:
            break
    else:
        raise NoSolution("no block factorization found")
    zero = S.zero
    phi0 = GradedMatrix(S, (0,) * r, (1,) * r,
                        [[a[k] if k == l else (U[k][l] if k < l else zero(1)) for l in range(r)]
                         for k in range(r)])
    phi1 = GradedMatrix(S, (1,) * r, (2,) * r,
                        [[b[k] if k == l else (V[k][l] if k < l else zero(1)) for l in range(r)]
                         for k in range(r)])
    phi = nmf_complete(phi0, phi1, C.f, N)
    if not nmf_verify(phi, N):
        raise VerificationFailed("glued factorization does not verify")
    res = minimal_resolution_window(nmf_coker(phi), min(steps, N), N)
    return ExtensionResult(phi, nonsplit, res.is_linear(), res)


def point_module(A: PresentedAlgebra, p) -> ModulePresentation:
    """``A / (linear forms vanishing at p)``."""
    F = A.field
    coords = p.coords if isinstance(p, Point) else Point.make(F, p).coords
    forms = linalg.nullspace(F, [list(coords)], A.n)
    row = [A.linear_form(v) for v in forms]
    return ModulePresentation(A, GradedMatrix(A, (0,), (1,) * len(row), [row]))


def point_ext1_dim(A: PresentedAlgebra, p, q, N: int = DEFAULT_WINDOW) -> int:
    """dim Ext^1(M_p, M_q)_0 over a commutative polynomial ring A."""
    return graded_ext1_dim(point_module(A, p), point_module(A, q), N)


def orbit_certificate(C: SkewContext, orbit: CopointOrbit) -> bool:
    """``l_i l_{i+1} = a_{i+1,n} a_{i,n} f`` in S for every step."""
    S, F = C.S, C.field
    for i in range(len(orbit.points) - 1):
        c = F.mul(orbit.points[i + 1].coords[-1], orbit.points[i].coords[-1])
        if S.multiply(orbit.forms[i], orbit.forms[i + 1]) != C.f.f.scale(c):
            return False
    return True

