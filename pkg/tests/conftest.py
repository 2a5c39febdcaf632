from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from ncmf.algebra import PresentedAlgebra, normalizing_automorphism
from ncmf.grmod import GradedMatrix
from ncmf.nmf import nmf_complete
from ncmf.scalar import GF, QQ

settings.register_profile(
    "ncmf", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ncmf")


def linear_family(F=QQ, alpha=2, a=3, b=5):
    """``S = k<x,y>/(x^2,y^2)``, ``f = alpha xy + yx``, ``Phi0 = ax + by``."""
    S = PresentedAlgebra.free(F, 2, [1, 2])
    x, y = S.gens()
    alpha, a, b = F.convert(alpha), F.convert(a), F.convert(b)
    f = (x * y).scale(alpha) + y * x
    ne = normalizing_automorphism(S, f)
    p0 = GradedMatrix(S, (0,), (1,), [[x.scale(a) + y.scale(b)]])
    p1 = GradedMatrix(S, (1,), (2,), [[x.scale(F.inv(b)) + y.scale(F.mul(alpha, F.inv(a)))]])
    return S, ne, nmf_complete(p0, p1, ne)


@pytest.fixture
def pair_nmf():
    return linear_family()


@pytest.fixture
def f13():
    return GF(13)
