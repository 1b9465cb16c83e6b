"""Command line: ``buzano-lab verify|compute|alpha|tightness|evaluate``.

Exit codes: 0 success, 1 violations found, 2 usage or precondition error.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import alpha as alpha_mod
from .decompositions import dixmier_cos, load_subspace, polar
from .functionals import center_of_mass, dist_to_scalars, numerical_radius, paul_functional
from .inequalities import (
    ALL_IDS,
    Instance,
    InvalidInstance,
    evaluate,
    parse_id,
    tightness_search,
)
from .linalg import DEFAULT_TOL, PreconditionError, Tolerances, load_matrix, matrix_to_json, min_modulus, op_norm
from .suite import suite_run


class UsageError(Exception):
    pass


def _g(x):
    """Round to 15 significant digits for printing."""
    return float(f"{x:.15g}")


def _cplx(z):
    return [_g(complex(z).real), _g(complex(z).imag)]


def _parse_complex(text):
    text = text.strip()
    if "," in text:
        re, im = text.split(",", 1)
        return complex(float(re), float(im))
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a complex number") from None


def _parse_dims(text):
    try:
        dims = [int(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise UsageError(f"bad --dims value {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise UsageError("--dims needs positive integers")
    return dims


def _parse_suite(text):
    if text.strip().lower() == "all":
        return list(ALL_IDS)
    try:
        return [parse_id(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _seed(text):
    try:
        s = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def _tol(args):
    if args.tol is None:
        return DEFAULT_TOL
    try:
        return Tolerances(check_tol=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(path):
    try:
        return load_matrix(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read matrix {path}: {exc}") from None


def _open_for_write(path):
    try:
        return open(path, "w")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _emit(obj):
    print(json.dumps(obj))


# -- verbs -----------------------------------------------------------------------------


def cmd_verify(args):
    ids = _parse_suite(args.suite)
    dims = _parse_dims(args.dims)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    tol = _tol(args)
    fh = _open_for_write(args.report) if args.report else None
    csv_ok = _open_for_write(args.csv) if args.csv else None
    if csv_ok:
        csv_ok.close()
    report = suite_run(ids, dims, args.trials, args.seed, tol)
    if fh:
        with fh:
            fh.write(report.dumps())
    if args.csv:
        report.write_csv(args.csv)
    for c in report.cells:
        if c.violations or c.exhausted:
            print(
                f"VIOLATION {c.id} dim={c.dim}: {c.violations}/{c.trials} violated, "
                f"{c.exhausted} unusable, worst {c.worst_instance}",
                file=sys.stderr,
            )
    cells = len(report.cells)
    print(
        f"{cells} cells, {sum(c.trials for c in report.cells)} instances, "
        f"{report.violations} violations, {report.exhausted} unusable, "
        f"{sum(c.regenerations for c in report.cells)} regenerations, {report.wall_time:.1f}s"
    )
    return 0 if report.passed else 1


def cmd_compute(args):
    what = args.what
    tol = _tol(args)
    if what == "dixmier":
        if not (args.subspace and args.subspace2):
            raise UsageError("dixmier needs --subspace and --subspace2")
        try:
            S, T = load_subspace(args.subspace), load_subspace(args.subspace2)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read subspace: {exc}") from None
        c = dixmier_cos(S, T)
        _emit({"cos": _g(c), "theta0": _g(math.acos(c))})
        return 0
    if not args.matrix:
        raise UsageError(f"{what} needs --matrix")
    T = _load(args.matrix)
    if what == "omega":
        _emit(_g(numerical_radius(T)))
    elif what == "norm":
        _emit(_g(op_norm(T)))
    elif what == "min-modulus":
        _emit(_g(min_modulus(T)))
    elif what in ("center-of-mass", "dist-scalars"):
        res = center_of_mass(T) if what == "center-of-mass" else dist_to_scalars(T)
        key = "gamma" if what == "center-of-mass" else "beta"
        _emit({key: _cplx(res.minimizer), "dist": _g(res.distance)})
    elif what == "paul":
        if not args.matrix2:
            raise UsageError("paul needs --matrix2 (the operator T in M_T(A))")
        T2 = _load(args.matrix2)
        if T2.shape != T.shape:
            raise UsageError("matrices differ in size")
        try:
            _emit(_g(paul_functional(T, T2, tol=tol)))
        except PreconditionError as exc:
            raise UsageError(str(exc)) from None
    elif what == "polar":
        parts = polar(T, tol)
        _emit({"V": matrix_to_json(np.round(parts.V, 15)), "absT": matrix_to_json(np.round(parts.absT, 15))})
    return 0


def cmd_alpha(args):
    T = _load(args.matrix)
    tol = _tol(args)
    if args.action == "member":
        if args.alpha is None:
            raise UsageError("member needs --alpha")
        a = _parse_complex(args.alpha)
        if a == 0:
            raise UsageError("alpha must be non-zero")
        cert = alpha_mod.membership(T, a, tol)
        out = {"alpha": _cplx(a), "defect": _g(cert.defect), "member": cert.member}
        if cert.witness is not None:
            out["witness"] = [_cplx(z) for z in cert.witness]
        _emit(out)
    elif args.action == "optimal":
        res = alpha_mod.optimal_alpha(T, tol)
        member = None
        if res.minimizer != 0:
            member = alpha_mod.membership(T, res.minimizer, tol).member
        _emit({"alpha": _cplx(res.minimizer), "distance": _g(res.distance), "member": member})
    else:
        reg = alpha_mod.alpha_region(T, tol)
        _emit({"kind": reg.kind, "parameters": [_g(p) for p in reg.parameters]})
    return 0


def cmd_tightness(args):
    try:
        id_ = parse_id(args.ineq)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fh = _open_for_write(args.report) if args.report else None
    try:
        ratio, witness = tightness_search(id_, args.dim, args.restarts, args.seed, _tol(args))
    except ValueError as exc:
        if fh:
            fh.close()
        raise UsageError(str(exc)) from None
    out = {
        "id": id_.value,
        "dim": args.dim,
        "restarts": args.restarts,
        "seed": args.seed,
        "best_ratio": ratio,
        "witness": None if witness is None else witness.to_json(),
    }
    if fh:
        with fh:
            json.dump(out, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"{id_.value} dim={args.dim}: best ratio {ratio:.12f}")
    return 0


def cmd_evaluate(args):
    try:
        id_ = parse_id(args.ineq)
        path = args.instance
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
        if "witness" in obj and "matrices" not in obj:
            obj = obj["witness"]
        inst = Instance.from_json(obj)
        v = evaluate(id_, inst, _tol(args))
    except (ValueError, InvalidInstance) as exc:
        raise UsageError(str(exc)) from None
    _emit(
        {
            "id": id_.value,
            "lhs": v.lhs,
            "rhs": v.rhs,
            "slack": v.slack,
            "ratio": v.ratio,
            "holds": v.holds,
            "chain": [{"label": k.label, "lhs": k.lhs, "rhs": k.rhs, "holds": k.holds} for k in v.chain],
        }
    )
    return 0 if v.holds else 1


# -- parser ----------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="buzano-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify", help="run the inequality suite")
    v.add_argument("--suite", default="all", help="'all' or a comma-separated list of ids")
    v.add_argument("--dims", default="2,3,4,8,16")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=_seed, default=42)
    v.add_argument("--tol", type=float, help="check tolerance (default 1e-9)")
    v.add_argument("--report", help="JSON report path")
    v.add_argument("--csv", help="optional CSV with one row per (id, dim)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compute", help="evaluate one functional on a matrix file")
    c.add_argument(
        "--what",
        required=True,
        choices=["omega", "norm", "min-modulus", "center-of-mass", "dist-scalars", "paul", "polar", "dixmier"],
    )
    c.add_argument("--matrix")
    c.add_argument("--matrix2")
    c.add_argument("--subspace")
    c.add_argument("--subspace2")
    c.add_argument("--tol", type=float)
    c.set_defaults(func=cmd_compute)

    a = sub.add_parser("alpha", help="membership in A_alpha")
    a.add_argument("action", choices=["member", "optimal", "region"])
    a.add_argument("--matrix", required=True)
    a.add_argument("--alpha", help="complex number, e.g. 2, 1+1j or 1,1")
    a.add_argument("--tol", type=float)
    a.set_defaults(func=cmd_alpha)

    t = sub.add_parser("tightness", help="search for near-equality witnesses")
    t.add_argument("--ineq", required=True)
    t.add_argument("--dim", type=int, default=2)
    t.add_argument("--restarts", type=int, default=64)
    t.add_argument("--seed", type=_seed, default=0)
    t.add_argument("--report")
    t.add_argument("--tol", type=float)
    t.set_defaults(func=cmd_tightness)

    e = sub.add_parser("evaluate", help="evaluate one inequality on a saved instance or tightness report")
    e.add_argument("--ineq", required=True)
    e.add_argument("--instance", required=True)
    e.add_argument("--tol", type=float)
    e.set_defaults(func=cmd_evaluate)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
