"""Twisting by powers of a graded automorphism.

The twisted algebra is never re-presented: its product ``a * b =
a sigma^{deg a}(b)`` is computed in the base algebra.  Factorizations are
twisted row by row, entry ``(s, t)`` of ``Phi^i`` becoming
``sigma^{-m}(Phi^i_{st})`` where m is the target shift of row s.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    DEFAULT_WINDOW,
    AlgebraElement,
    GradedAutomorphism,
    NormalElement,
)
from .errors import MixedAlgebras, NoRootInField, NotEigenvector, NotFixed, VerificationFailed
from .grmod import GradedMatrix
from .nmf import NMF, nmf_complete, nmf_component, nmf_shifts
from .scalar import raw_nth_root

__all__ = [
    "TwistedAlgebra",
    "TwistedNMF",
    "twisted_multiply",
    "untwist",
    "eps",
    "eigenvalue",
    "eps_normalize",
    "twist_nmf",
    "untwist_nmf",
]


class TwistedAlgebra:
    """The twist of ``base`` by the system ``theta_i = sigma^i``.

    ``base`` may itself be a TwistedAlgebra; sigma acts on the underlying
    vector space of the root presented algebra.
    """

    def __init__(self, base, sigma: GradedAutomorphism):
        root = base.root if isinstance(base, TwistedAlgebra) else base
        if sigma.algebra != root:
            raise MixedAlgebras("automorphism of a different algebra")
        self.base = base
        self.sigma = sigma
        self.root = root
        self.field = root.field

    def __repr__(self):
        return f"TwistedAlgebra({self.base!r}, {self.sigma!r})"

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        for x in (a, b):
            if x.algebra != self.root:
                raise MixedAlgebras("operand is not an element of the underlying algebra")
        return self.base.multiply(a, self.sigma.power(a.degree).apply(b))


def twisted_multiply(T: TwistedAlgebra, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return T.multiply(a, b)


def untwist(T: TwistedAlgebra) -> TwistedAlgebra:
    """Twisting ``T`` by ``sigma^{-1}`` gives back the product of ``T.base``."""
    return TwistedAlgebra(T, T.sigma.power(-1))


def eps(algebra, mu) -> GradedAutomorphism:
    """``epsilon_mu``: multiply every generator by mu."""
    return GradedAutomorphism.diagonal(algebra, [mu] * algebra.n)


def eigenvalue(sigma: GradedAutomorphism, f: AlgebraElement):
    """The scalar lambda with ``sigma(f) = lambda f``, or NotEigenvector."""
    F = sigma.algebra.field
    if f.is_zero():
        raise NotEigenvector("f is zero")
    img = sigma.apply(f)
    w, c = next(iter(f.terms.items()))
    lam = F.div(img.coeff(w), c)
    if lam == 0 or img != f.scale(lam):
        raise NotEigenvector("sigma(f) is not a nonzero multiple of f")
    return lam


def eps_normalize(sigma: GradedAutomorphism, f: AlgebraElement, d: int | None = None):
    """Rescale sigma by ``lambda^{-1/d}`` so that it fixes f.

    Returns ``(sigma_normalized, lambda)``; the d-th root is the smallest
    residue over F_p.
    """
    F = sigma.algebra.field
    d = f.degree if d is None else d
    lam = eigenvalue(sigma, f)
    mu = raw_nth_root(F, lam, d)
    if mu is None:
        raise NoRootInField(f"{F.fmt(lam)} has no {d}-th root in {F!r}")
    new = eps(sigma.algebra, F.inv(mu)).compose(sigma)
    return new, lam


def _row_twist(M: GradedMatrix, sigma: GradedAutomorphism, sign: int) -> GradedMatrix:
    rows = []
    for s, row in enumerate(M.entries):
        tw = sigma.power(sign * M.target[s])
        rows.append([tw.apply(a) for a in row])
    return GradedMatrix(M.algebra, M.target, M.source, rows)


@dataclass(eq=False)
class TwistedNMF:
    """Row-twisted components of an NMF over a twisted algebra."""

    algebra: TwistedAlgebra
    f: NormalElement
    shifts0: tuple
    shifts1: tuple
    psi0: GradedMatrix
    psi1: GradedMatrix
    source: NMF | None = None

    def component(self, i: int) -> GradedMatrix:
        if self.source is None:
            raise ValueError("components beyond the stored pair need the source factorization")
        return _row_twist(nmf_component(self.source, i), self.algebra.sigma, -1)

    def product(self, i: int) -> GradedMatrix:
        """``Psi^i * Psi^{i+1}`` under the twisted product."""
        return _twisted_compose(self.algebra, self.component(i), self.component(i + 1))


def _twisted_compose(T: TwistedAlgebra, P: GradedMatrix, Q: GradedMatrix) -> GradedMatrix:
    root = T.root
    rows = []
    for s in range(P.nrows):
        row = []
        for u in range(Q.ncols):
            acc = root.zero(Q.source[u] - P.target[s])
            for t in range(P.ncols):
                a, b = P.entries[s][t], Q.entries[t][u]
                if a.terms and b.terms:
                    acc = acc + T.multiply(a, b)
            row.append(acc)
        rows.append(row)
    return GradedMatrix(root, P.target, Q.source, rows)


def _check_twisted(tw: TwistedNMF, indices) -> list:
    failures = []
    for i in indices:
        target = GradedMatrix.scalar_diagonal(tw.f.f, nmf_shifts(tw.source, i))
        if tw.product(i) != target:
            failures.append(i)
    return failures


def twist_nmf(phi: NMF, sigma: GradedAutomorphism, N: int = DEFAULT_WINDOW,
              check_range: int = 4) -> TwistedNMF:
    """Twist a factorization by sigma (which must fix f)."""
    if sigma.algebra != phi.algebra:
        raise MixedAlgebras("automorphism of a different algebra")
    if sigma.apply(phi.f.f) != phi.f.f:
        raise NotFixed("sigma does not fix f; use eps_normalize first")
    T = TwistedAlgebra(phi.algebra, sigma)
    tw = TwistedNMF(T, phi.f, phi.shifts0, phi.shifts1,
                    _row_twist(phi.phi0, sigma, -1), _row_twist(phi.phi1, sigma, -1), phi)
    bad = _check_twisted(tw, range(-check_range, check_range + 1))
    if bad:
        raise VerificationFailed(f"twisted products fail at positions {bad}")
    return tw


def untwist_nmf(tw: TwistedNMF, sigma: GradedAutomorphism | None = None,
                N: int = DEFAULT_WINDOW) -> NMF:
    """Undo :func:`twist_nmf` on the stored pair and rebuild the factorization."""
    sigma = tw.algebra.sigma if sigma is None else sigma
    T = TwistedAlgebra(tw.algebra.root, sigma)
    if _twisted_compose(T, tw.psi0, tw.psi1) != GradedMatrix.scalar_diagonal(tw.f.f, tw.shifts0):
        raise VerificationFailed("stored pair does not factor f under the twisted product")
    phi0 = _row_twist(tw.psi0, sigma, 1)
    phi1 = _row_twist(tw.psi1, sigma, 1)
    try:
        return nmf_complete(phi0, phi1, tw.f, N)
    except ValueError as exc:
        raise VerificationFailed(str(exc)) from None
