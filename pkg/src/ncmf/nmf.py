"""Noncommutative graded matrix factorizations.

An :class:`NMF` stores only the pair ``(Phi0, Phi1)``, their shifts, the
regular normal element f and its normalizing automorphism nu.  All other
components follow from ``Phi^{i+2} = nu(Phi^i)`` with shifts raised by
``d = deg f``:

    Phi^{2j}   = nu^j(Phi0),  F^{2j}   = shifts0 + j d
    Phi^{2j+1} = nu^j(Phi1),  F^{2j+1} = shifts1 + j d

``Phi^i`` maps ``F^{i+1} -> F^i`` and consecutive products equal ``f E``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from . import linalg
from .algebra import (
    DEFAULT_WINDOW,
    AlgebraElement,
    GradedAutomorphism,
    NormalElement,
    PresentedAlgebra,
    opposite_algebra,
)
from .errors import (
    FNotInImage,
    MixedContexts,
    NoSolution,
    NotInjectiveInWindow,
    NotInvertible,
    NotScalarMultiple,
    NotSquare,
    ProductNotF,
    ShiftMismatch,
    SquareDoesNotCommute,
)
from .grmod import (
    ComplexWindow,
    GradedMatrix,
    ModulePresentation,
    QuotientAlgebra,
    block_diagonal,
    chain_map_space,
    coker_bijective_window,
    combine,
    compose,
    degreewise_map,
    graded_inverse,
    solve_preimage,
)
from .scalar import INFINITE, raw_multiplicative_order

__all__ = [
    "NMF",
    "NMFMorphism",
    "TMFPair",
    "PeriodResult",
    "VerifyReport",
    "quotient_algebra",
    "nmf_component",
    "nmf_shifts",
    "nmf_verify",
    "nmf_complete",
    "nmf_rescale",
    "rescale_factors",
    "nmf_trivial",
    "nmf_shift",
    "nmf_direct_sum",
    "nmf_dual",
    "nmf_base_change",
    "morphism_complete",
    "morphism_space",
    "find_isomorphism",
    "to_tmf",
    "from_tmf",
    "nmf_coker",
    "coker_hilbert",
    "complex_from_nmf",
    "nmf_from_module",
    "nmf_reduce",
    "nmf_period",
    "automorphism_order",
]


@lru_cache(maxsize=64)
def _quotient(base: PresentedAlgebra, f: AlgebraElement) -> QuotientAlgebra:
    return QuotientAlgebra(base, f)


def quotient_algebra(f: NormalElement) -> QuotientAlgebra:
    """The (cached) quotient A = S/(f)."""
    return _quotient(f.f.algebra, f.f)


@dataclass(eq=False)
class NMF:
    """A graded right matrix factorization of f, stored as its pair (Phi0, Phi1)."""

    algebra: PresentedAlgebra
    f: NormalElement
    shifts0: tuple
    shifts1: tuple
    phi0: GradedMatrix
    phi1: GradedMatrix
    window: int = DEFAULT_WINDOW
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.shifts0 = tuple(self.shifts0)
        self.shifts1 = tuple(self.shifts1)
        d = self.f.d
        if self.phi0.target != self.shifts0 or self.phi0.source != self.shifts1:
            raise ShiftMismatch("Phi0 must map F1 -> F0")
        if self.phi1.target != self.shifts1 or self.phi1.source != tuple(m + d for m in self.shifts0):
            raise ShiftMismatch("Phi1 must map F2 = F0(-d) -> F1")

    @property
    def rank(self) -> int:
        return len(self.shifts0)

    @property
    def d(self) -> int:
        return self.f.d

    @property
    def nu(self) -> GradedAutomorphism:
        return self.f.nu

    def component(self, i: int) -> GradedMatrix:
        return nmf_component(self, i)

    def same_stored(self, other: "NMF") -> bool:
        return (
            self.algebra == other.algebra
            and self.f.f == other.f.f
            and self.shifts0 == other.shifts0
            and self.shifts1 == other.shifts1
            and self.phi0 == other.phi0
            and self.phi1 == other.phi1
        )

    def __eq__(self, other):
        return isinstance(other, NMF) and self.same_stored(other)

    __hash__ = None


def nmf_shifts(phi: NMF, i: int) -> tuple:
    j, r = divmod(i, 2)
    base = phi.shifts0 if r == 0 else phi.shifts1
    return tuple(m + j * phi.d for m in base)


def nmf_component(phi: NMF, i: int) -> GradedMatrix:
    """``Phi^i``: ``nu^j`` applied to the stored matrix of the same parity."""
    try:
        return phi._cache[("c", i)]
    except KeyError:
        pass
    j, r = divmod(i, 2)
    M = phi.phi0 if r == 0 else phi.phi1
    if j:
        sigma = phi.nu.power(j)
        M = M.map_entries(sigma.apply).shifted(j * phi.d)
    phi._cache[("c", i)] = M
    return M


def _fE(f: NormalElement, shifts) -> GradedMatrix:
    return GradedMatrix.scalar_diagonal(f.f, shifts)


def _injective_window(M: GradedMatrix, N: int) -> bool:
    F = M.field
    for e in range(N + 1):
        Mx, nc = degreewise_map(M, e)
        if nc and linalg.rank(F, Mx) != nc:
            return False
    return True


@dataclass
class VerifyReport:
    ok: bool
    failures: list
    window: int

    def __bool__(self):
        return self.ok


def nmf_verify(phi: NMF, N: int | None = None) -> VerifyReport:
    """Check both stored products, shift compatibility and injectivity of Phi0."""
    N = phi.window if N is None else N
    failures = []
    if len(phi.shifts0) != len(phi.shifts1):
        failures.append("rank of F0 differs from rank of F1")
    try:
        if compose(phi.phi0, phi.phi1) != _fE(phi.f, phi.shifts0):
            failures.append("Phi0 Phi1 != f E")
        if compose(phi.phi1, nmf_component(phi, 2)) != _fE(phi.f, phi.shifts1):
            failures.append("Phi1 nu(Phi0) != f E")
    except ShiftMismatch as exc:
        failures.append(f"shift mismatch: {exc}")
    if not _injective_window(phi.phi0, N):
        failures.append(f"Phi0 not injective in degrees <= {N}")
    return VerifyReport(not failures, failures, N)


def nmf_complete(phi0: GradedMatrix, phi1: GradedMatrix, f: NormalElement,
                 N: int = DEFAULT_WINDOW) -> NMF:
    """Build the factorization determined by a pair with ``Phi0 Phi1 = f E``."""
    S = f.f.algebra
    if phi0.algebra != S or phi1.algebra != S:
        raise MixedContexts("matrices are not over the algebra of f")
    if phi0.nrows != phi0.ncols or phi1.nrows != phi1.ncols:
        raise NotSquare("factorization matrices must be square")
    if phi0.source != phi1.target:
        raise ShiftMismatch("source of Phi0 must equal target of Phi1")
    if phi1.source != tuple(m + f.d for m in phi0.target):
        raise ShiftMismatch("source of Phi1 must be F0 shifted by deg f")
    if compose(phi0, phi1) != _fE(f, phi0.target):
        raise ProductNotF("Phi0 Phi1 is not f E")
    if not _injective_window(phi0, N):
        raise NotInjectiveInWindow(f"Phi0 is not injective in degrees <= {N}")
    phi = NMF(S, f, phi0.target, phi0.source, phi0, phi1, N)
    if compose(phi1, nmf_component(phi, 2)) != _fE(f, phi.shifts1):
        raise ProductNotF("Phi1 nu(Phi0) is not f E beyond the window")
    return phi


def _scalar_ratio(prod: GradedMatrix, f: NormalElement):
    """lambda with prod = lambda f E, else NotScalarMultiple."""
    F = prod.field
    fe = f.f
    if prod.nrows != prod.ncols:
        raise NotScalarMultiple("product is not square")
    lam = None
    piv = next(iter(fe.terms))
    for s, row in enumerate(prod.entries):
        for t, a in enumerate(row):
            if s != t:
                if a.terms:
                    raise NotScalarMultiple(f"off-diagonal entry ({s},{t}) is nonzero")
                continue
            c = F.div(a.coeff(piv), fe.terms[piv])
            if a != fe.scale(c):
                raise NotScalarMultiple(f"diagonal entry {s} is not a multiple of f")
            if lam is None:
                lam = c
            elif c != lam:
                raise NotScalarMultiple("diagonal entries are different multiples of f")
    if lam is None or lam == 0:
        raise NotScalarMultiple("lambda is zero")
    return lam


def rescale_factors(F, lambdas: dict) -> dict:
    """Factors c_i with c_0 = 1 and c_i c_{i+1} lambda_i = 1."""
    c = {0: F.one}
    i = 0
    while i in lambdas:
        c[i + 1] = F.inv(F.mul(lambdas[i], c[i]))
        i += 1
    i = -1
    while i in lambdas:
        c[i] = F.inv(F.mul(lambdas[i], c[i + 1]))
        i -= 1
    return c


def nmf_rescale(mats, f: NormalElement, lambdas=None, N: int = DEFAULT_WINDOW):
    """Turn a sequence with ``Phi^i Phi^{i+1} = lambda_i f E`` into a strict NMF.

    ``mats`` is a list (indices from 0) or a dict ``{i: Phi^i}`` containing 0
    and 1.  ``lambdas`` is inferred from the products when omitted.  Returns
    ``(nmf, factors)`` with ``nmf.component(i) == factors[i] * mats[i]``.
    """
    mats = dict(enumerate(mats)) if isinstance(mats, (list, tuple)) else dict(mats)
    if 0 not in mats or 1 not in mats:
        raise ValueError("Phi^0 and Phi^1 are required")
    F = f.f.field
    lam = {}
    for i in sorted(mats):
        if i + 1 in mats:
            prod = compose(mats[i], mats[i + 1])
            found = _scalar_ratio(prod, f)
            if lambdas is not None and i in lambdas:
                given = F.convert(lambdas[i])
                if given == 0:
                    raise NotScalarMultiple(f"lambda_{i} is zero")
                if given != found:
                    raise NotScalarMultiple(f"lambda_{i} given as {F.fmt(given)}, found {F.fmt(found)}")
            lam[i] = found
    if lambdas is not None:
        for i, v in dict(lambdas).items():
            if F.convert(v) == 0:
                raise NotScalarMultiple(f"lambda_{i} is zero")
    c = rescale_factors(F, lam)
    phi = nmf_complete(mats[0], mats[1].scale(c[1]), f, N)
    for i, M in mats.items():
        if i in c and nmf_component(phi, i) != M.scale(c[i]):
            raise NotScalarMultiple(f"Phi^{i} does not follow the nu-recurrence")
    return phi, c


def nmf_trivial(kind: str, shifts, f: NormalElement) -> NMF:
    """``right``: (id, f E) with Coker 0;  ``left``: (f E, id) with Coker = free A-module."""
    S = f.f.algebra
    shifts = tuple(shifts)
    d = f.d
    if kind == "right":
        phi0 = GradedMatrix.identity(S, shifts)
        phi1 = _fE(f, shifts)
        return NMF(S, f, shifts, shifts, phi0, phi1)
    if kind == "left":
        up = tuple(m + d for m in shifts)
        phi0 = _fE(f, shifts)
        phi1 = GradedMatrix.identity(S, up)
        return NMF(S, f, shifts, up, phi0, phi1)
    raise ValueError("kind must be 'right' or 'left'")


def nmf_shift(phi: NMF, j: int) -> NMF:
    """Reindex: the result has stored pair (Phi^j, Phi^{j+1})."""
    if j == 0:
        return phi
    return NMF(phi.algebra, phi.f, nmf_shifts(phi, j), nmf_shifts(phi, j + 1),
               nmf_component(phi, j), nmf_component(phi, j + 1), phi.window)


def _same_context(phi: NMF, psi: NMF):
    if phi.algebra != psi.algebra or phi.f.f != psi.f.f or phi.nu != psi.nu:
        raise MixedContexts("factorizations of different elements or algebras")


def nmf_direct_sum(phi: NMF, psi: NMF) -> NMF:
    _same_context(phi, psi)
    return NMF(phi.algebra, phi.f, phi.shifts0 + psi.shifts0, phi.shifts1 + psi.shifts1,
               block_diagonal(phi.phi0, psi.phi0), block_diagonal(phi.phi1, psi.phi1),
               min(phi.window, psi.window))


def nmf_dual(phi: NMF) -> NMF:
    """The dual factorization ``Hom_S(phi, S)``, as a right factorization over S^op.

    Component i of the dual is the reversed transpose of ``Phi^{-i-1}``; the
    reversed f is normal in S^op with automorphism ``nu^{-1}``.
    """
    S = phi.algebra
    Sop, rev = opposite_algebra(S)
    nu_inv = phi.nu.power(-1)
    f_op = NormalElement(rev(phi.f.f), phi.d, GradedAutomorphism(Sop, nu_inv.matrix, check=False),
                         phi.f.window)
    psi0 = nmf_component(phi, -1).transpose_with(rev, Sop)
    psi1 = nmf_component(phi, -2).transpose_with(rev, Sop)
    return NMF(Sop, f_op, psi0.target, psi0.source, psi0, psi1, phi.window)


def nmf_base_change(phi: NMF, P0: GradedMatrix, P1: GradedMatrix) -> NMF:
    """``Psi^i = P^i Phi^i (P^{i+1})^{-1}`` with ``P^2 = nu(P^0)``."""
    P0inv = graded_inverse(P0)
    P1inv = graded_inverse(P1)
    P2inv = P0inv.map_entries(phi.nu.apply).shifted(phi.d)
    psi0 = compose(compose(P0, phi.phi0), P1inv)
    psi1 = compose(compose(P1, phi.phi1), P2inv)
    return NMF(phi.algebra, phi.f, psi0.target, psi0.source, psi0, psi1, phi.window)


@dataclass(eq=False)
class NMFMorphism:
    """A morphism of factorizations; ``mu^i : F^i -> G^i``."""

    source: NMF
    target: NMF
    mu0: GradedMatrix
    mu1: GradedMatrix

    def component(self, i: int) -> GradedMatrix:
        j, r = divmod(i, 2)
        M = self.mu0 if r == 0 else self.mu1
        if j:
            M = M.map_entries(self.source.nu.power(j).apply).shifted(j * self.source.d)
        return M

    def is_isomorphism(self) -> bool:
        try:
            graded_inverse(self.mu0)
            graded_inverse(self.mu1)
        except NotInvertible:
            return False
        return True


def morphism_complete(phi: NMF, psi: NMF, mu0: GradedMatrix, mu1: GradedMatrix) -> NMFMorphism:
    """Morphism determined by a commuting square ``mu0 Phi0 = Psi0 mu1``."""
    _same_context(phi, psi)
    if compose(mu0, phi.phi0) != compose(psi.phi0, mu1):
        raise SquareDoesNotCommute("mu0 Phi0 != Psi0 mu1")
    mor = NMFMorphism(phi, psi, mu0, mu1)
    if compose(mu1, phi.phi1) != compose(psi.phi1, mor.component(2)):
        raise SquareDoesNotCommute("second square fails: mu1 Phi1 != Psi1 nu(mu0)")
    return mor


def morphism_space(phi: NMF, psi: NMF) -> list:
    """Basis of degree-0 commuting squares ``(mu0, mu1)`` from phi to psi."""
    _same_context(phi, psi)
    return chain_map_space(phi.phi0, psi.phi0)


def _random_combination(pairs, F, rng):
    coeffs = [F.random_element(rng) for _ in pairs]
    return combine(pairs, coeffs)


def find_isomorphism(phi: NMF, psi: NMF, seed=0, trials: int = 16):
    """Search a random invertible morphism; returns NMFMorphism or None."""
    if phi.shifts0 and sorted(phi.shifts0) != sorted(psi.shifts0):
        return None
    if sorted(phi.shifts1) != sorted(psi.shifts1):
        return None
    pairs = morphism_space(phi, psi)
    if not pairs:
        return None if phi.rank or psi.rank else NMFMorphism(phi, psi, phi.phi0, phi.phi0)
    F = phi.algebra.field
    for trial in range(trials):
        rng = random.Random(f"{seed}:iso:{trial}")
        mu0, mu1 = _random_combination(pairs, F, rng)
        mor = NMFMorphism(phi, psi, mu0, mu1)
        if mor.is_isomorphism():
            return morphism_complete(phi, psi, mu0, mu1)
    return None


@dataclass(eq=False)
class TMFPair:
    """Pair form: ``psi : F -> G`` and the nu-semilinear map ``x -> tau nu(x)``."""

    psi: GradedMatrix
    tau: GradedMatrix
    f: NormalElement

    @property
    def nu(self) -> GradedAutomorphism:
        return self.f.nu

    def apply_tau(self, column):
        """The semilinear map on a column: ``tau * nu(column)``."""
        return self.tau.apply([self.nu.apply(a) for a in column])


def to_tmf(phi: NMF) -> TMFPair:
    return TMFPair(phi.phi0, phi.phi1, phi.f)


def from_tmf(t: TMFPair, N: int = DEFAULT_WINDOW) -> NMF:
    """Inverse of :func:`to_tmf`; checks ``psi tau = f E`` and ``tau nu(psi) = f E``."""
    f = t.f
    if compose(t.psi, t.tau) != _fE(f, t.psi.target):
        raise ProductNotF("psi tau is not f E")
    if not _injective_window(t.psi, N):
        raise NotInjectiveInWindow(f"psi is not injective in degrees <= {N}")
    twisted = t.psi.map_entries(f.nu.apply).shifted(f.d)
    if compose(t.tau, twisted) != _fE(f, t.tau.target):
        raise ProductNotF("tau nu(psi) is not f E")
    return NMF(f.f.algebra, f, t.psi.target, t.psi.source, t.psi, t.tau, N)


def nmf_coker(phi: NMF, i: int = 0) -> ModulePresentation:
    """Presentation of Coker of Phi^i reduced modulo f (the i-th syzygy for i >= 0)."""
    A = quotient_algebra(phi.f)
    return ModulePresentation(A, nmf_component(phi, i).reduce_to(A))


def coker_hilbert(phi: NMF, N: int = DEFAULT_WINDOW, i: int = 0) -> list:
    return nmf_coker(phi, i).hilbert(N)


def complex_from_nmf(phi: NMF, lo: int, hi: int, N: int = DEFAULT_WINDOW) -> ComplexWindow:
    """Maps ``Phi^i mod f`` for lo <= i <= hi."""
    A = quotient_algebra(phi.f)
    return ComplexWindow({i: nmf_component(phi, i).reduce_to(A) for i in range(lo, hi + 1)}, N)


def nmf_from_module(M: ModulePresentation, f: NormalElement, N: int = DEFAULT_WINDOW) -> NMF:
    """Factorization from a square presentation over S of a module killed by f."""
    S = f.f.algebra
    P = M.matrix
    if P.algebra != S:
        if isinstance(P.algebra, QuotientAlgebra) and P.algebra.base == S:
            P = P.lift_to(S)
        else:
            raise MixedContexts("presentation is not over the algebra of f")
    if P.nrows != P.ncols:
        raise NotSquare(f"presentation is {P.nrows} x {P.ncols}")
    if not _injective_window(P, N):
        raise NotInjectiveInWindow(f"presentation is not injective in degrees <= {N}")
    cols = []
    for j, m in enumerate(P.target):
        w = [f.f if s == j else S.zero() for s in range(P.nrows)]
        try:
            v, _ = solve_preimage(P, w, m + f.d)
        except NoSolution:
            raise FNotInImage(f"f times generator {j} is not in the image") from None
        cols.append(v)
    psi = GradedMatrix(S, P.source, [m + f.d for m in P.target],
                       [[cols[j][s] for j in range(P.nrows)] for s in range(P.ncols)])
    return nmf_complete(P, psi, f, N)


def _find_scalar(M: GradedMatrix):
    for s, row in enumerate(M.entries):
        for t, a in enumerate(row):
            if a.degree == 0 and a.terms:
                return s, t
    return None


def _split_scalar_phi0(phi: NMF, s: int, t: int):
    """Isolate the scalar entry (s, t) of Phi0; return (rest, shift of summand)."""
    S = phi.algebra
    F = S.field
    A0 = phi.phi0.entries
    c = A0[s][t].scalar_value()
    cinv = F.inv(c)
    r = phi.rank
    P0 = [[S.one() if i == j else S.zero() for j in range(r)] for i in range(r)]
    for i in range(r):
        if i != s and A0[i][t].terms:
            P0[i][s] = A0[i][t].scale(F.neg(cinv))
    P1 = [[S.one() if i == j else S.zero() for j in range(r)] for i in range(r)]
    for j in range(r):
        if j != t and A0[s][j].terms:
            P1[t][j] = A0[s][j].scale(cinv)
    P0m = GradedMatrix(S, phi.shifts0, phi.shifts0, P0)
    P1m = GradedMatrix(S, phi.shifts1, phi.shifts1, P1)
    psi = nmf_base_change(phi, P0m, P1m)
    rows0 = [i for i in range(r) if i != s]
    cols0 = [j for j in range(r) if j != t]
    rest = NMF(S, phi.f, [phi.shifts0[i] for i in rows0], [phi.shifts1[j] for j in cols0],
               psi.phi0.submatrix(rows0, cols0), psi.phi1.submatrix(cols0, rows0), phi.window)
    return rest, phi.shifts0[s]


def nmf_reduce(phi: NMF):
    """Split off trivial summands until no stored entry is an invertible scalar.

    Returns ``(reduced, summands)``; summands are trivial factorizations.
    """
    summands = []
    cur = phi
    while cur.rank:
        hit = _find_scalar(cur.phi0)
        if hit is not None:
            cur, m = _split_scalar_phi0(cur, *hit)
            summands.append(nmf_trivial("right", (m,), cur.f))
            continue
        hit = _find_scalar(cur.phi1)
        if hit is not None:
            shifted = nmf_shift(cur, 1)
            rest, m = _split_scalar_phi0(shifted, hit[0], hit[1])
            summands.append(nmf_trivial("left", (m - cur.d,), cur.f))
            cur = nmf_shift(rest, -1)
            continue
        break
    return cur, summands


@dataclass
class PeriodResult:
    """Least l with Coker(Phi^l) isomorphic to Coker(Phi^0)(-m), when found."""

    period: int | None
    shift: int | None
    certificate: dict | None
    window: int
    searched: int

    @property
    def found(self) -> bool:
        return self.period is not None


def nmf_period(phi: NMF, max_l: int = 8, N: int = DEFAULT_WINDOW, seed=0,
               trials: int = 16) -> PeriodResult:
    """Randomized, certificate-carrying search for the period.

    For each l and each candidate shift m, the degree-0 chain maps between
    the presentations ``Phi^l`` and ``Phi^0(-m)`` over A = S/(f) are
    computed; random combinations are tested for inducing a bijection of
    cokernels on degrees 0..N.  A returned period always carries a verified
    chain map.
    """
    A = quotient_algebra(phi.f)
    F = A.field
    P0 = nmf_component(phi, 0).reduce_to(A)
    base_dims = ModulePresentation(A, P0).hilbert(N)
    for l in range(1, max_l + 1):
        Pl = nmf_component(phi, l).reduce_to(A)
        Ml = ModulePresentation(A, Pl)
        cands = sorted({a - b for a in Pl.target for b in P0.target})
        for m in cands:
            Q = P0.shifted(m)
            dims_l = Ml.hilbert(N)
            shifted_dims = [base_dims[e - m] if 0 <= e - m <= N else 0 for e in range(N + 1)]
            if dims_l != shifted_dims:
                continue
            pairs = chain_map_space(Pl, Q)
            if not pairs:
                continue
            for trial in range(trials):
                rng = random.Random(f"{seed}:{l}:{m}:{trial}")
                U, V = _random_combination(pairs, F, rng)
                if compose(U, Pl) != compose(Q, V):
                    continue
                if coker_bijective_window(Pl, Q, U, N):
                    cert = {"U": U, "V": V, "trial": trial}
                    return PeriodResult(l, m, cert, N, l)
    return PeriodResult(None, None, None, N, max_l)


def automorphism_order(sigma: GradedAutomorphism, bound: int = 64):
    """Order of sigma: exact for diagonal matrices, else searched up to ``bound``.

    Returns an int, ``INFINITE`` (diagonal case only) or None when not found.
    """
    F = sigma.algebra.field
    if sigma.is_diagonal():
        order = 1
        for i in range(sigma.algebra.n):
            o = raw_multiplicative_order(F, sigma.matrix[i][i])
            if o == INFINITE:
                return INFINITE
            order = order * o // math.gcd(order, o)
        return order
    for k in range(1, bound + 1):
        if sigma.power(k).is_identity():
            return k
    return None
