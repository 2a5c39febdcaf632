"""Exact computations with graded noncommutative matrix factorizations."""

from __future__ import annotations

from .algebra import (
    DEFAULT_WINDOW,
    AlgebraElement,
    GradedAutomorphism,
    NormalElement,
    PresentedAlgebra,
    hilbert_window,
    normalizing_automorphism,
)
from .grmod import GradedMatrix, ModulePresentation, QuotientAlgebra, compose
from .nmf import NMF, nmf_complete, nmf_component, nmf_rescale, nmf_verify
from .polyparse import parse_poly
from .scalar import GF, QQ, FieldElem, PrimeField, Rationals

__all__ = [
    "DEFAULT_WINDOW",
    "AlgebraElement",
    "GradedAutomorphism",
    "NormalElement",
    "PresentedAlgebra",
    "hilbert_window",
    "normalizing_automorphism",
    "GradedMatrix",
    "ModulePresentation",
    "QuotientAlgebra",
    "compose",
    "NMF",
    "nmf_complete",
    "nmf_component",
    "nmf_rescale",
    "nmf_verify",
    "parse_poly",
    "GF",
    "QQ",
    "FieldElem",
    "PrimeField",
    "Rationals",
]

__version__ = "0.1.0"
