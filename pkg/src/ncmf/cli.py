"""Command-line front end.

Every subcommand reads JSON inputs, runs one library operation and prints a
JSON report (``--text`` for a flat key/value view).  Exit codes: 0 success,
1 verification or computation failure, 2 unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import DEFAULT_WINDOW, hilbert_window
from .copoint import build_extension_nmf, is_copoint, nmf_from_point, point_module
from .errors import NcmfError, NotEigenvector, SchemaError
from .grmod import ModulePresentation
from .io import (
    algebra_from_json,
    algebra_to_json,
    automorphism_from_json,
    automorphism_to_json,
    context_from_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    module_from_json,
    nmf_from_json,
    nmf_to_json,
    normal_from_json,
    point_from_json,
)
from .nmf import (
    automorphism_order,
    coker_hilbert,
    nmf_complete,
    nmf_dual,
    nmf_from_module,
    nmf_period,
    nmf_reduce,
    nmf_rescale,
    nmf_verify,
    quotient_algebra,
)
from .quadratic import RawRelations, quadratic_dual
from .resolution import graded_ext1_dim, minimal_resolution_window
from .scalar import INFINITE
from .twist import eigenvalue, eps_normalize, twist_nmf

__all__ = ["main", "build_parser", "run"]


class InputError(Exception):
    """Raised while loading inputs; mapped to exit code 2."""


def _load(fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except (OSError, ValueError, TypeError, KeyError, ZeroDivisionError, NcmfError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None


def _read(path):
    return _load(load_json, path)


# loaders + runners ---------------------------------------------------------


def cmd_verify(args):
    phi = _load(nmf_from_json, _read(args.input), args.window)
    rep = nmf_verify(phi, args.window)
    return {"ok": rep.ok, "failures": rep.failures, "rank": phi.rank, "window": args.window}, rep.ok


def _pair_input(obj, window):
    S = algebra_from_json(obj.get("algebra"))
    return S, normal_from_json(obj, S, window)


def cmd_complete(args):
    obj = _read(args.input)

    def load():
        if isinstance(obj.get("phi0"), list):  # grids with shifts0/shifts1
            raw = nmf_from_json(obj, args.window)
            return raw.f, raw.phi0, raw.phi1
        S, ne = _pair_input(obj, args.window)
        return ne, matrix_from_json(obj["phi0"], S), matrix_from_json(obj["phi1"], S)

    ne, p0, p1 = _load(load)
    phi = nmf_complete(p0, p1, ne, args.window)
    return {"ok": True, "nmf": nmf_to_json(phi), "window": args.window}, True


def cmd_rescale(args):
    obj = _read(args.input)

    def load():
        S, ne = _pair_input(obj, args.window)
        raw = obj["components"]
        items = enumerate(raw) if isinstance(raw, list) else ((int(k), v) for k, v in raw.items())
        mats = {i: matrix_from_json(m, S) for i, m in items}
        lam = obj.get("lambdas")
        if lam is not None:
            lam = {int(k): v for k, v in lam.items()}
        return ne, mats, lam

    ne, mats, lam = _load(load)
    phi, c = nmf_rescale(mats, ne, lam, args.window)
    F = ne.f.field
    factors = {str(i): F.fmt(v) for i, v in sorted(c.items()) if i in mats}
    return {"ok": True, "nmf": nmf_to_json(phi), "factors": factors, "window": args.window}, True


def cmd_twist(args):
    phi = _load(nmf_from_json, _read(args.input), args.window)
    sigma, lam_given = _load(automorphism_from_json, _read(args.twist), phi.algebra)
    F = phi.algebra.field
    f = phi.f.f
    lam = None
    if lam_given is not None:
        lam = eigenvalue(sigma, f)
        if lam != lam_given:
            raise NotEigenvector(f"sigma(f) = {F.fmt(lam)} f, not {F.fmt(lam_given)} f")
    if args.normalize:
        sigma, lam = eps_normalize(sigma, f, phi.d)
    tw = twist_nmf(phi, sigma, args.window, args.range)
    comps = {str(i): matrix_to_json(tw.component(i)) for i in range(-args.range, args.range + 1)}
    report = {
        "ok": True,
        "sigma": automorphism_to_json(sigma),
        "lambda": None if lam is None else F.fmt(lam),
        "components": comps,
        "checked": [-args.range, args.range],
        "window": args.window,
    }
    return report, True


def _order_json(o):
    if o is None:
        return None
    return "infinite" if o == INFINITE else o


def cmd_period(args):
    phi = _load(nmf_from_json, _read(args.input), args.window)
    pr = nmf_period(phi, args.max, args.window, args.seed, args.trials)
    o = automorphism_order(phi.nu)
    report = {
        "period": pr.period,
        "shift": pr.shift,
        "searched": pr.searched,
        "window": pr.window,
        "seed": args.seed,
        "nu_order": _order_json(o),
        "certificate": None,
    }
    if pr.found:
        cert = pr.certificate
        report["certificate"] = {"U": matrix_to_json(cert["U"]), "V": matrix_to_json(cert["V"]),
                                 "trial": cert["trial"]}
    return report, True


def cmd_resolve(args):
    M, _ = _load(module_from_json, _read(args.input), args.window)
    res = minimal_resolution_window(M, args.steps, args.window)
    report = {
        "betti": [list(b) for b in res.betti],
        "ranks": res.ranks,
        "linear": res.is_linear(),
        "truncated": res.truncated,
        "differentials": [matrix_to_json(D) for D in res.differentials],
        "window": args.window,
    }
    return report, True


def cmd_from_module(args):
    M, ne = _load(module_from_json, _read(args.input), args.window)
    if ne is None:
        raise InputError("SchemaError: module input needs 'f'")
    phi = nmf_from_module(M, ne, args.window)
    rep = nmf_verify(phi, args.window)
    return {"ok": rep.ok, "nmf": nmf_to_json(phi), "coker_hilbert": coker_hilbert(phi, args.window),
            "window": args.window}, rep.ok


def _context_and_points(args):
    C = _load(context_from_json, _read(args.context), args.window)
    pts = [_load(point_from_json, _read(p), C.field) for p in args.points]
    return C, pts


def cmd_from_point(args):
    C, pts = _context_and_points(args)
    if len(pts) != 1:
        raise InputError("SchemaError: from-point takes exactly one point")
    point, raw = pts[0]
    ok, orbit = is_copoint(C, point, args.max, args.window)
    phi, pr = nmf_from_point(C, raw, args.max, args.window, args.seed, args.trials)
    F = C.field
    report = {
        "nmf": nmf_to_json(phi),
        "orbit": [q.to_json()["coords"] for q in orbit.points],
        "scalars": [None if c is None else F.fmt(c) for c in orbit.scalars],
        "period": pr.period,
        "shift": pr.shift,
        "coker_hilbert": coker_hilbert(phi, args.window),
        "window": args.window,
    }
    return report, True


def cmd_extension(args):
    C, pts = _context_and_points(args)
    if not pts:
        raise InputError("SchemaError: extension needs at least one point")
    res = build_extension_nmf(C, [raw for _, raw in pts], args.window, args.seed, args.trials,
                              args.steps)
    report = {
        "nmf": nmf_to_json(res.nmf),
        "nonsplit": res.nonsplit,
        "linear": res.linear,
        "betti": [list(b) for b in res.resolution.betti],
        "truncated": res.resolution.truncated,
        "coker_hilbert": coker_hilbert(res.nmf, args.window),
        "window": args.window,
    }
    return report, True


def cmd_hilbert(args):
    obj = _read(args.input)
    N = args.window
    if isinstance(obj, dict) and "phi0" in obj:
        phi = _load(nmf_from_json, obj, N)
        A = quotient_algebra(phi.f)
        return {"algebra": hilbert_window(phi.algebra, N), "quotient": hilbert_window(A, N),
                "coker": coker_hilbert(phi, N), "window": N}, True
    if isinstance(obj, dict) and "matrix" in obj:
        M, _ = _load(module_from_json, obj, N)
        return {"module": M.hilbert(N), "window": N}, True
    A = _load(algebra_from_json, obj)
    report = {"algebra": hilbert_window(A, N), "window": N}
    if isinstance(obj, dict) and "f" in obj:
        ne = _load(normal_from_json, obj, A, N)
        report["quotient"] = hilbert_window(quotient_algebra(ne), N)
    return report, True


def cmd_dual(args):
    obj = _read(args.input)
    if isinstance(obj, dict) and "phi0" in obj:
        phi = _load(nmf_from_json, obj, args.window)
        dual = nmf_dual(phi)
        rep = nmf_verify(dual, args.window)
        return {"ok": rep.ok, "nmf": nmf_to_json(dual), "window": args.window}, rep.ok
    A = _load(algebra_from_json, obj)
    D = quadratic_dual(A)
    if isinstance(D, RawRelations):
        return {"dual": None, "relations": D.describe()}, True
    return {"dual": algebra_to_json(D)}, True


def cmd_reduce(args):
    phi = _load(nmf_from_json, _read(args.input), args.window)
    red, summands = nmf_reduce(phi)
    out = []
    for s in summands:
        kind = "right" if s.phi0.entries[0][0].degree == 0 else "left"
        out.append({"kind": kind, "shift": s.shifts0[0]})
    report = {"nmf": nmf_to_json(red), "rank": red.rank, "summands": out, "window": args.window}
    return report, True


def _module_or_point(A, obj, N):
    if isinstance(obj, dict) and "coords" in obj:
        return point_module(A, obj["coords"])
    if isinstance(obj, dict) and "matrix" in obj:
        return ModulePresentation(A, matrix_from_json(obj["matrix"], A))
    raise SchemaError("expected a point ({'coords': ...}) or a module ({'matrix': ...})")


def cmd_ext1(args):
    A = _load(algebra_from_json, _read(args.algebra))
    M = _load(_module_or_point, A, _read(args.first), args.window)
    Mp = _load(_module_or_point, A, _read(args.second), args.window)
    return {"ext1": graded_ext1_dim(M, Mp, args.window), "window": args.window}, True


# parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncmf", description="Graded noncommutative matrix factorizations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="degree window N")
    common.add_argument("--seed", type=int, default=0, help="random seed (NCMF_SEED overrides)")
    common.add_argument("--trials", type=int, default=16, help="random trials per search step")
    common.add_argument("--text", action="store_true", help="key/value text instead of JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.set_defaults(func=fn)
        return sp

    add("verify", cmd_verify, "check an NMF").add_argument("input")
    add("complete", cmd_complete, "build an NMF from (Phi0, Phi1)").add_argument("input")
    add("rescale", cmd_rescale, "rescale a lambda-twisted sequence").add_argument("input")
    sp = add("twist", cmd_twist, "twist an NMF by an automorphism")
    sp.add_argument("input")
    sp.add_argument("twist")
    sp.add_argument("--normalize", action="store_true", help="rescale sigma to fix f first")
    sp.add_argument("--range", type=int, default=4, help="report components with |i| <= range")
    sp = add("period", cmd_period, "search for the period")
    sp.add_argument("input")
    sp.add_argument("--max", type=int, default=8, help="largest period tried")
    sp = add("resolve", cmd_resolve, "minimal resolution prefix of a module")
    sp.add_argument("input")
    sp.add_argument("--steps", type=int, default=4)
    add("from-module", cmd_from_module, "NMF from a square presentation").add_argument("input")
    sp = add("from-point", cmd_from_point, "rank-one NMF from a point")
    sp.add_argument("context")
    sp.add_argument("points", nargs=1)
    sp.add_argument("--max", type=int, default=8, help="orbit length L")
    sp = add("extension", cmd_extension, "block NMF glued from points")
    sp.add_argument("context")
    sp.add_argument("points", nargs="+")
    sp.add_argument("--steps", type=int, default=8)
    add("hilbert", cmd_hilbert, "Hilbert windows").add_argument("input")
    add("dual", cmd_dual, "dual NMF or quadratic dual algebra").add_argument("input")
    add("reduce", cmd_reduce, "split off trivial summands").add_argument("input")
    sp = add("ext1", cmd_ext1, "dim Ext^1 between two modules or points")
    sp.add_argument("algebra")
    sp.add_argument("first")
    sp.add_argument("second")
    return p


def _render(report: dict, text: bool) -> str:
    if not text:
        return json.dumps(report, sort_keys=True, indent=2)
    return "\n".join(f"{k}: {json.dumps(report[k], sort_keys=True)}" for k in sorted(report))


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    env_seed = os.environ.get("NCMF_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            parser.error(f"NCMF_SEED must be an integer, got {env_seed!r}")
    try:
        report, ok = args.func(args)
        code = 0 if ok else 1
    except InputError as exc:
        report, code = {"error": "input", "message": str(exc)}, 2
    except (NcmfError, ValueError, ZeroDivisionError) as exc:
        report, code = {"error": type(exc).__name__, "message": str(exc)}, 1
    report = {"command": args.command, **report}
    print(_render(report, args.text), file=out)
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
