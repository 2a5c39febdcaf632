"""JSON encodings of fields, algebras, matrices, factorizations and points.

Scalars are written as strings (``"3/4"``, ``"12"``); polynomials use the
text format of :mod:`ncmf.polyparse`.  Alpha values of a skew algebra are
triples ``[i, j, "value"]`` with 1-based ``i < j``; a full matrix with
``null`` on the diagonal is accepted as well.
"""

from __future__ import annotations

import json

from .algebra import (
    DEFAULT_WINDOW,
    GradedAutomorphism,
    PresentedAlgebra,
    format_element,
    normalizing_automorphism,
    skew_alpha,
)
from .copoint import Point, SkewContext
from .errors import NotNormal, SchemaError
from .grmod import GradedMatrix, ModulePresentation
from .nmf import NMF, quotient_algebra
from .polyparse import parse_poly
from .scalar import Field, field_from_json

__all__ = [
    "load_json",
    "field_json",
    "algebra_from_json",
    "algebra_to_json",
    "matrix_from_json",
    "matrix_to_json",
    "automorphism_from_json",
    "automorphism_to_json",
    "nmf_from_json",
    "nmf_to_json",
    "module_from_json",
    "normal_from_json",
    "context_from_json",
    "point_from_json",
    "scalar_text",
]


def load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _need(obj, key, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object with key {key!r}")
    if key not in obj:
        raise SchemaError(f"missing key {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"key {key!r} has the wrong type")
    return v


def scalar_text(F: Field, c) -> str:
    return F.fmt(c)


def field_json(obj) -> Field:
    try:
        return field_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad field description {obj!r}: {exc}") from None


def _alpha_from_json(F: Field, n: int, raw):
    if not isinstance(raw, list):
        raise SchemaError("alpha must be a list")
    if any(isinstance(row, list) and None in row for row in raw):
        if len(raw) != n or any(not isinstance(r, list) or len(r) != n for r in raw):
            raise SchemaError("alpha matrix must be n x n")
        return [[None if i == j else F.convert(raw[i][j]) for j in range(n)] for i in range(n)]
    pairs = {}
    for item in raw:
        if not (isinstance(item, list) and len(item) == 3
                and all(isinstance(k, int) and not isinstance(k, bool) for k in item[:2])):
            raise SchemaError(f"alpha entry {item!r} is not [i, j, value]")
        i, j, v = item
        if not 1 <= i < j <= n:
            raise SchemaError(f"alpha entry {item!r} needs 1 <= i < j <= n")
        pairs[(i, j)] = v
    return skew_alpha(F, n, pairs)


def algebra_from_json(obj) -> PresentedAlgebra:
    F = field_json(_need(obj, "field"))
    n = _need(obj, "n", int)
    kind = obj.get("commutation", "skew")
    Z = obj.get("square_zero", [])
    if not isinstance(Z, list):
        raise SchemaError("square_zero must be a list")
    if kind == "skew":
        alpha = _alpha_from_json(F, n, _need(obj, "alpha"))
        return PresentedAlgebra(F, n, "skew", alpha, Z)
    if kind == "free":
        return PresentedAlgebra(F, n, "free", None, Z)
    raise SchemaError(f"unknown commutation {kind!r}")


def algebra_to_json(A: PresentedAlgebra) -> dict:
    F = A.field
    out = {
        "field": F.to_json(),
        "n": A.n,
        "commutation": A.commutation,
        "square_zero": sorted(A.square_zero),
    }
    if A.commutation == "skew":
        out["alpha"] = [[i + 1, j + 1, F.fmt(A.alpha[i][j])]
                        for i in range(A.n) for j in range(i + 1, A.n)]
    return out


def _entries(A, raw, nrows, ncols, target, source):
    if not isinstance(raw, list) or len(raw) != nrows:
        raise SchemaError(f"expected {nrows} rows of entries")
    rows = []
    for s, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != ncols:
            raise SchemaError(f"row {s} should have {ncols} entries")
        out = []
        for t, text in enumerate(row):
            if not isinstance(text, str):
                raise SchemaError(f"entry ({s}, {t}) must be a polynomial string")
            out.append(parse_poly(text, A, source[t] - target[s]))
        rows.append(out)
    return rows


def matrix_from_json(obj, A) -> GradedMatrix:
    target = _need(obj, "target_shifts", list)
    source = _need(obj, "source_shifts", list)
    rows = _entries(A, _need(obj, "entries"), len(target), len(source), target, source)
    return GradedMatrix(A, target, source, rows)


def _grid(M: GradedMatrix) -> list:
    return [[format_element(a) for a in row] for row in M.entries]


def matrix_to_json(M: GradedMatrix) -> dict:
    return {
        "target_shifts": list(M.target),
        "source_shifts": list(M.source),
        "entries": _grid(M),
    }


def _scalar_matrix(F: Field, raw, n: int):
    if not isinstance(raw, list) or len(raw) != n or any(
            not isinstance(r, list) or len(r) != n for r in raw):
        raise SchemaError(f"expected an {n} x {n} scalar matrix")
    return [[F.convert(v) for v in row] for row in raw]


def automorphism_from_json(obj, A: PresentedAlgebra):
    """``{"sigma": [[...]], "lambda": "val"}``: row j is the image of x_{j+1}."""
    sigma = GradedAutomorphism(A, _scalar_matrix(A.field, _need(obj, "sigma"), A.n))
    lam = obj.get("lambda")
    return sigma, (None if lam is None else A.field.convert(lam))


def automorphism_to_json(sigma: GradedAutomorphism) -> list:
    F = sigma.algebra.field
    return [[F.fmt(c) for c in row] for row in sigma.matrix]


def normal_from_json(obj, S, N: int = DEFAULT_WINDOW):
    """Read ``f`` (and optionally ``d``, ``nu``) and certify it as regular normal."""
    text = _need(obj, "f", str)
    d = obj.get("d")
    f = parse_poly(text, S, d)
    ne = normalizing_automorphism(S, f, N)
    if "nu" in obj:
        given = _scalar_matrix(S.field, obj["nu"], S.n)
        if tuple(tuple(r) for r in given) != tuple(tuple(r) for r in ne.nu.matrix):
            raise NotNormal("supplied nu differs from the normalizing automorphism of f")
    return ne


def _component(obj, key, S, target, source):
    raw = _need(obj, key)
    if isinstance(raw, dict):
        M = matrix_from_json(raw, S)
        if M.target != tuple(target) or M.source != tuple(source):
            raise SchemaError(f"{key} shifts disagree with shifts0/shifts1")
        return M
    return GradedMatrix(S, target, source, _entries(S, raw, len(target), len(source), target, source))


def nmf_from_json(obj, N: int = DEFAULT_WINDOW) -> NMF:
    S = algebra_from_json(_need(obj, "algebra"))
    ne = normal_from_json(obj, S, N)
    s0 = tuple(_need(obj, "shifts0", list))
    s1 = tuple(_need(obj, "shifts1", list))
    phi0 = _component(obj, "phi0", S, s0, s1)
    phi1 = _component(obj, "phi1", S, s1, [m + ne.d for m in s0])
    return NMF(S, ne, s0, s1, phi0, phi1, N)


def nmf_to_json(phi: NMF) -> dict:
    return {
        "algebra": algebra_to_json(phi.algebra),
        "f": format_element(phi.f.f),
        "d": phi.d,
        "nu": automorphism_to_json(phi.nu),
        "shifts0": list(phi.shifts0),
        "shifts1": list(phi.shifts1),
        "phi0": _grid(phi.phi0),
        "phi1": _grid(phi.phi1),
    }


def module_from_json(obj, N: int = DEFAULT_WINDOW):
    """``{"algebra", "matrix", "f"?}`` -> (presentation, f or None).

    With ``f`` the module lives over ``S/(f)`` and the matrix is read over S.
    """
    S = algebra_from_json(_need(obj, "algebra"))
    M = matrix_from_json(_need(obj, "matrix"), S)
    if "f" in obj:
        ne = normal_from_json(obj, S, N)
        return ModulePresentation(quotient_algebra(ne), M), ne
    return ModulePresentation(S, M), None


def context_from_json(obj, N: int = DEFAULT_WINDOW):
    F = field_json(_need(obj, "field"))
    raw = _need(obj, "alpha", list)
    if any(isinstance(row, list) and None in row for row in raw):
        n = len(raw)
    else:
        n = max((max(item[0], item[1]) for item in raw if isinstance(item, list) and len(item) == 3),
                default=0)
        n = obj.get("n", n)
    if n < 2:
        raise SchemaError("a context needs at least two generators")
    return SkewContext(_alpha_from_json(F, n, raw), F, N)


def point_from_json(obj, field: Field):
    coords = _need(obj, "coords", list)
    return Point.make(field, coords), [field.convert(c) for c in coords]
