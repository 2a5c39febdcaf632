from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ncmf.algebra import quotient_hilbert_window
from ncmf.errors import (
    NotInjectiveInWindow,
    NotScalarMultiple,
    NotSquare,
    ProductNotF,
    ShiftMismatch,
    SquareDoesNotCommute,
)
from ncmf.grmod import GradedMatrix, ModulePresentation, compose, exactness_window
from ncmf.nmf import (
    NMF,
    TMFPair,
    automorphism_order,
    coker_hilbert,
    complex_from_nmf,
    find_isomorphism,
    from_tmf,
    morphism_complete,
    morphism_space,
    nmf_base_change,
    nmf_coker,
    nmf_complete,
    nmf_component,
    nmf_direct_sum,
    nmf_dual,
    nmf_from_module,
    nmf_period,
    nmf_reduce,
    nmf_rescale,
    nmf_shift,
    nmf_shifts,
    nmf_trivial,
    nmf_verify,
    to_tmf,
)
from ncmf.scalar import GF, QQ

from conftest import linear_family


def lin(S, a, b):
    x, y = S.gens()
    return x.scale(a) + y.scale(b)


def one_by_one(S, t, s, a):
    return GradedMatrix(S, (t,), (s,), [[a]])


def test_components(pair_nmf):
    S, ne, phi = pair_nmf
    assert nmf_component(phi, 0) == phi.phi0
    assert nmf_component(phi, 1) == phi.phi1
    inv = ne.nu.power(-1)
    assert nmf_component(phi, -1) == phi.phi1.map_entries(inv.apply).shifted(-2)
    for i in range(-4, 4):
        P, Q = nmf_component(phi, i), nmf_component(phi, i + 1)
        assert P.target == nmf_shifts(phi, i) and P.source == nmf_shifts(phi, i + 1)
        assert compose(P, Q) == GradedMatrix.scalar_diagonal(ne.f, nmf_shifts(phi, i))


def test_verify(pair_nmf):
    S, ne, phi = pair_nmf
    assert nmf_verify(phi)
    x, y = S.gens()
    bad = NMF(S, ne, (0,), (1,), one_by_one(S, 0, 1, x), one_by_one(S, 1, 2, y))
    rep = nmf_verify(bad)
    assert not rep and "Phi0 Phi1 != f E" in rep.failures
    assert nmf_verify(nmf_trivial("right", (0,), ne))


def test_nmf_checks_shifts(pair_nmf):
    S, ne, phi = pair_nmf
    with pytest.raises(ShiftMismatch):
        NMF(S, ne, (0,), (1,), phi.phi0, phi.phi0)


def test_complete_errors(pair_nmf):
    S, ne, phi = pair_nmf
    with pytest.raises(ProductNotF):
        nmf_complete(phi.phi0, phi.phi1.scale(15), ne)
    x, y = S.gens()
    wide = GradedMatrix(S, (0,), (1, 1), [[x, y]])
    with pytest.raises(NotSquare):
        nmf_complete(wide, phi.phi1, ne)
    with pytest.raises(ShiftMismatch):
        nmf_complete(phi.phi0, phi.phi0, ne)
    # (x) is not injective on k<x,y>/(x^2,y^2)
    with pytest.raises((NotInjectiveInWindow, ProductNotF)):
        nmf_complete(one_by_one(S, 0, 1, x), one_by_one(S, 1, 2, y), ne)


def test_complete_trivial(pair_nmf):
    S, ne, _ = pair_nmf
    triv = nmf_complete(GradedMatrix.identity(S, (0,)),
                        GradedMatrix.scalar_diagonal(ne.f, (0,)), ne)
    assert triv == nmf_trivial("right", (0,), ne)


def test_rescale_example():
    S, ne, _ = linear_family()
    mats = {i: one_by_one(S, i, i + 1, lin(S, 3, 5 * 2 ** i)) for i in range(5)}
    for i in range(4):
        prod = compose(mats[i], mats[i + 1])
        assert prod == GradedMatrix.scalar_diagonal(ne.f.scale(15 * 2 ** i), (i,))
    phi, c = nmf_rescale(mats, ne)
    assert phi.phi0.entries[0][0] == lin(S, 3, 5)
    assert phi.phi1.entries[0][0] == lin(S, Fraction(1, 5), Fraction(2, 3))
    assert c[1] == Fraction(1, 15) and c[2] == Fraction(1, 2)


def test_rescale_identity_and_zero(pair_nmf):
    S, ne, phi = pair_nmf
    out, c = nmf_rescale([phi.phi0, phi.phi1], ne)
    assert out == phi and c == {0: 1, 1: 1}
    with pytest.raises(NotScalarMultiple):
        nmf_rescale([phi.phi0, phi.phi1], ne, {0: 0})
    with pytest.raises(NotScalarMultiple):
        nmf_rescale([phi.phi0, phi.phi1], ne, {0: 3})
    with pytest.raises(ValueError):
        nmf_rescale({0: phi.phi0}, ne)


def test_trivial_cokers(pair_nmf):
    S, ne, _ = pair_nmf
    right = nmf_trivial("right", (0,), ne)
    left = nmf_trivial("left", (0,), ne)
    assert nmf_verify(right) and nmf_verify(left)
    assert coker_hilbert(right, 4) == [0] * 5
    assert coker_hilbert(left, 4) == quotient_hilbert_window(S, ne.f, 4)
    with pytest.raises(ValueError):
        nmf_trivial("middle", (0,), ne)


def test_shift(pair_nmf):
    _, _, phi = pair_nmf
    assert nmf_shift(phi, 0) is phi
    two = nmf_shift(phi, 2)
    for i in range(-2, 3):
        assert nmf_component(two, i) == nmf_component(phi, i + 2)
    assert nmf_shift(nmf_shift(phi, 3), -3) == phi


def test_direct_sum(pair_nmf):
    S, ne, phi = pair_nmf
    zero = NMF(S, ne, (), (), GradedMatrix.zero(S, (), ()), GradedMatrix.zero(S, (), ()))
    assert nmf_direct_sum(phi, zero) == phi
    two = nmf_direct_sum(phi, phi)
    assert two.rank == 2 and nmf_verify(two)


def test_dual(pair_nmf):
    S, ne, phi = pair_nmf
    D = nmf_dual(phi)
    assert D.rank == 1 and nmf_verify(D)
    for i in range(-3, 3):
        prod = compose(nmf_component(D, i), nmf_component(D, i + 1))
        assert prod == GradedMatrix.scalar_diagonal(D.f.f, nmf_shifts(D, i))
    right = nmf_dual(nmf_trivial("right", (0,), ne))
    assert coker_hilbert(right, 4) == quotient_hilbert_window(S, ne.f, 4)


def test_morphisms(pair_nmf):
    S, ne, phi = pair_nmf
    I0 = GradedMatrix.identity(S, phi.shifts0)
    I1 = GradedMatrix.identity(S, phi.shifts1)
    mor = morphism_complete(phi, phi, I0, I1)
    assert mor.is_isomorphism() and mor.component(2) == GradedMatrix.identity(S, nmf_shifts(phi, 2))
    assert morphism_complete(phi, phi, I0.scale(3), I1.scale(3)).is_isomorphism()
    with pytest.raises(SquareDoesNotCommute):
        morphism_complete(phi, phi, I0.scale(2), I1)
    assert len(morphism_space(phi, phi)) == 1
    assert find_isomorphism(phi, phi) is not None


def test_scaled_point_forms_are_isomorphic():
    S, ne, phi = linear_family()
    _, _, psi = linear_family(a=6, b=10)
    mor = find_isomorphism(phi, psi, seed=3)
    assert mor is not None and mor.is_isomorphism()
    _, _, chi = linear_family(a=3, b=7)
    assert find_isomorphism(phi, chi) is None


def test_tmf_round_trip(pair_nmf):
    S, ne, phi = pair_nmf
    t = to_tmf(phi)
    assert from_tmf(t) == phi
    col = [S.gens()[0]]
    assert t.apply_tau(col) == phi.phi1.apply([ne.nu.apply(col[0])])
    triv = to_tmf(nmf_trivial("right", (0,), ne))
    assert triv.psi == GradedMatrix.identity(S, (0,))
    with pytest.raises(ProductNotF):
        from_tmf(TMFPair(phi.phi0, phi.phi1.scale(2), ne))


def test_coker(pair_nmf):
    S, ne, phi = pair_nmf
    assert coker_hilbert(phi, 5) == [1, 1, 0, 0, 0, 0]
    assert coker_hilbert(nmf_trivial("right", (0,), ne), 3) == [0, 0, 0, 0]
    assert nmf_coker(phi).over.dim(2) == 1


def test_complete_resolution(pair_nmf):
    _, _, phi = pair_nmf
    C = complex_from_nmf(phi, -4, 5, 8)
    for i in range(-4, 5):
        assert exactness_window(C, i)
    D = nmf_dual(phi)
    CD = complex_from_nmf(D, -4, 5, 8)
    for i in range(-4, 5):
        assert exactness_window(CD, i)


def test_from_module(pair_nmf):
    S, ne, phi = pair_nmf
    M = ModulePresentation(S, phi.phi0)
    out = nmf_from_module(M, ne)
    assert out.phi1 == phi.phi1
    f_pres = ModulePresentation(S, GradedMatrix.scalar_diagonal(ne.f, (0,)))
    assert nmf_from_module(f_pres, ne) == nmf_trivial("left", (0,), ne)
    x, y = S.gens()
    with pytest.raises(NotSquare):
        nmf_from_module(ModulePresentation(S, GradedMatrix(S, (0,), (1, 1), [[x, y]])), ne)


def test_reduce(pair_nmf):
    S, ne, phi = pair_nmf
    red, summ = nmf_reduce(nmf_trivial("right", (0,), ne))
    assert red.rank == 0 and len(summ) == 1
    assert nmf_reduce(phi)[0] == phi
    planted = nmf_direct_sum(nmf_direct_sum(phi, nmf_trivial("right", (-1,), ne)),
                             nmf_trivial("left", (0,), ne))
    red, summ = nmf_reduce(planted)
    assert red.rank == 1 and len(summ) == 2 and nmf_verify(red)
    assert find_isomorphism(red, phi) is not None


def test_period_examples():
    F = GF(13)
    _, ne, phi = linear_family(F, alpha=5, a=1, b=1)
    assert automorphism_order(ne.nu) == 4
    res = nmf_period(phi, max_l=8, seed=1)
    assert res.period == 4 and res.certificate is not None
    assert nmf_period(linear_family(QQ, alpha=1)[2]).period == 1
    assert nmf_period(linear_family(QQ, alpha=-1)[2]).period == 2
    none = nmf_period(phi, max_l=2)
    assert not none.found and none.searched == 2


def random_scalar_base_change(phi, rng):
    S, F = phi.algebra, phi.algebra.field
    c0 = F.random_element(rng) or F.one
    c1 = F.random_element(rng) or F.one
    return nmf_base_change(phi, GradedMatrix.identity(S, phi.shifts0).scale(c0),
                           GradedMatrix.identity(S, phi.shifts1).scale(c1))


def test_period_invariant_under_base_change():
    _, _, phi = linear_family(GF(13), alpha=5, a=1, b=1)
    for trial in range(3):
        psi = random_scalar_base_change(phi, random.Random(trial))
        assert nmf_verify(psi)
        assert nmf_period(psi, seed=trial).period == 4


@given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 12))
def test_family_tmf_round_trip(alpha, a, b):
    _, _, phi = linear_family(GF(13), alpha=alpha, a=a, b=b)
    assert nmf_verify(phi)
    assert from_tmf(to_tmf(phi)) == phi
