from __future__ import annotations

from hypothesis import given, strategies as st

import pytest

from ncmf import linalg
from ncmf.algebra import GradedAutomorphism, PresentedAlgebra, normalizing_automorphism
from ncmf.errors import MixedAlgebras, NoRootInField, NotEigenvector, NotFixed
from ncmf.grmod import GradedMatrix
from ncmf.nmf import nmf_base_change, nmf_complete, nmf_direct_sum
from ncmf.scalar import GF, QQ
from ncmf.twist import (
    TwistedAlgebra,
    eigenvalue,
    eps,
    eps_normalize,
    twist_nmf,
    twisted_multiply,
    untwist,
    untwist_nmf,
)

from conftest import linear_family
from strategies import F13, algebras, diagonal_entries, elements

F17 = GF(17)


def constant_family(a=3, b=5):
    # f = xy + yx; the constant factorization (ax + by, b^-1 x + a^-1 y)
    return linear_family(F17, alpha=1, a=a, b=b)


def test_eps_normalize_example():
    S, ne, _ = constant_family()
    sigma_p = GradedAutomorphism.diagonal(S, [4, 1])
    sigma, lam = eps_normalize(sigma_p, ne.f)
    assert lam == 4
    assert sigma == GradedAutomorphism.diagonal(S, [2, 9])
    assert sigma.apply(ne.f) == ne.f


def test_eps_normalize_fixed_and_no_root():
    S, ne, _ = linear_family(QQ, alpha=1)
    ident = GradedAutomorphism.identity(S)
    assert eps_normalize(ident, ne.f) == (ident, 1)
    with pytest.raises(NoRootInField):
        eps_normalize(GradedAutomorphism.diagonal(S, [2, 1]), ne.f)
    with pytest.raises(NotEigenvector):
        eigenvalue(GradedAutomorphism(S, [[0, 1], [1, 0]]), linear_family(QQ)[1].f)


def test_twist_closed_form():
    S, ne, phi = constant_family()
    sigma = GradedAutomorphism.diagonal(S, [2, 9])
    tw = twist_nmf(phi, sigma)
    x, y = S.gens()
    a, b, half = 3, 5, 2
    for i in range(-3, 4):
        up, down = pow(half, i, 17), pow(half, -i, 17)
        if i % 2 == 0:
            want = x.scale(down * a) + y.scale(up * b)
        else:
            want = x.scale(down * pow(b, -1, 17)) + y.scale(up * pow(a, -1, 17))
        assert tw.component(i).entries[0][0] == want
        prod = tw.product(i)
        assert prod.entries[0][0] == ne.f


def test_twist_identity_is_noop(pair_nmf):
    S, _, phi = pair_nmf
    tw = twist_nmf(phi, GradedAutomorphism.identity(S))
    assert tw.psi0 == phi.phi0 and tw.psi1 == phi.phi1


def test_twist_requires_fixed_f(pair_nmf):
    S, _, phi = pair_nmf
    with pytest.raises(NotFixed):
        twist_nmf(phi, GradedAutomorphism.diagonal(S, [2, 1]))


def test_swap_twist_of_polynomial_ring():
    S = PresentedAlgebra.polynomial(QQ, 2)
    x, y = S.gens()
    ne = normalizing_automorphism(S, x * y)
    phi = nmf_complete(GradedMatrix(S, (0,), (1,), [[x]]), GradedMatrix(S, (1,), (2,), [[y]]), ne)
    swap = GradedAutomorphism(S, [[0, 1], [1, 0]])
    tw = twist_nmf(phi, swap)
    for i in range(-3, 4):
        assert tw.component(i).entries[0][0] == x


def test_round_trip_example():
    S, _, phi = constant_family()
    sigma = GradedAutomorphism.diagonal(S, [2, 9])
    assert untwist_nmf(twist_nmf(phi, sigma)) == phi
    ident = GradedAutomorphism.identity(S)
    assert untwist_nmf(twist_nmf(phi, ident)) == phi


def test_twisted_algebra_checks():
    S = PresentedAlgebra.polynomial(QQ, 2)
    T = PresentedAlgebra.polynomial(QQ, 3)
    with pytest.raises(MixedAlgebras):
        TwistedAlgebra(S, GradedAutomorphism.identity(T))
    tw = TwistedAlgebra(S, GradedAutomorphism.identity(S))
    with pytest.raises(MixedAlgebras):
        tw.multiply(T.gens()[0], S.gens()[0])


@given(st.data())
def test_twisted_product_laws(data):
    A = data.draw(algebras(F13))
    sigma = GradedAutomorphism.diagonal(A, data.draw(diagonal_entries(A.n)))
    tau = GradedAutomorphism.diagonal(A, data.draw(diagonal_entries(A.n)))
    T = TwistedAlgebra(A, sigma)
    a, b, c = (data.draw(elements(A, k)) for k in (1, 2, 1))
    assert twisted_multiply(T, twisted_multiply(T, a, b), c) == twisted_multiply(T, a, twisted_multiply(T, b, c))
    one = A.one()
    assert T.multiply(one, a) == a and T.multiply(a, one) == a
    assert untwist(T).multiply(a, b) == a * b
    TT = TwistedAlgebra(T, tau)
    assert TT.multiply(a, b) == TwistedAlgebra(A, sigma.compose(tau)).multiply(a, b)
    assert TwistedAlgebra(A, GradedAutomorphism.identity(A)).multiply(a, b) == a * b


def twisted_image_dims(S, entry, sigma, N):
    """Coker dims over S of left multiplication by a twisted 1x1 map."""
    T = TwistedAlgebra(S, sigma)
    out = []
    for e in range(N + 1):
        vecs = [S.coords(T.multiply(entry, S.monomial(w))) for w in S.basis(e - entry.degree)] \
            if e >= entry.degree else []
        out.append(S.dim(e) - (linalg.rank(S.field, vecs) if vecs else 0))
    return out


def test_normalized_and_raw_twists_agree_on_cokernels():
    S, ne, phi = constant_family()
    raw = GradedAutomorphism.diagonal(S, [4, 1])
    sigma, _ = eps_normalize(raw, ne.f)
    entry = phi.phi0.entries[0][0]
    base = twisted_image_dims(S, entry, GradedAutomorphism.identity(S), 5)
    assert twisted_image_dims(S, entry, sigma, 5) == base
    assert twisted_image_dims(S, entry, raw, 5) == base
    assert eps(S, 2).apply(entry) == entry.scale(2)


@given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 12), st.integers(1, 12),
       st.integers(1, 12), st.integers(0, 12))
def test_round_trip_rank_two(c, a1, b1, a2, b2, mix):
    S, ne, phi = linear_family(F13, alpha=5, a=a1, b=b1)
    _, _, psi = linear_family(F13, alpha=5, a=a2, b=b2)
    # sigma = diag(c, c^-1) fixes 5xy + yx
    sigma = GradedAutomorphism.diagonal(S, [c, pow(c, -1, 13)])
    big = nmf_direct_sum(phi, psi)
    P = GradedMatrix(S, (0, 0), (0, 0), [[S.one(), S.scalar(mix)], [S.zero(), S.one()]])
    big = nmf_base_change(big, P, GradedMatrix.identity(S, (1, 1)))
    assert untwist_nmf(twist_nmf(big, sigma)) == big
