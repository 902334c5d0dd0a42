"""Command-line front end.

Subcommands:

    gen --seed S --n N --m M --rank R --kind KIND -o FILE
    bounds FILE
    check-dual FILE [--tol T]
    canonical FILE -o FILE
    approx FILE
    suite FILE | suite --random COUNT --seed S

Reports go to stdout as JSON (or a plain table with --human).  Exit status:
0 when every check passed, 1 when a check failed, 2 on usage or I/O errors.
The QUATFRAME_TOL environment variable overrides the default tolerance for
commands that do not receive an explicit --tol.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import duals, fileio, frames, verify

DEFAULT_TOL = duals.TOL_VERIFY


def _tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get("QUATFRAME_TOL")
    return float(env) if env else DEFAULT_TOL


def _jsonable(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(doc: dict, human: bool) -> None:
    if not human:
        print(json.dumps(_jsonable(doc), indent=2))
        return
    if "checks" in doc:
        _print_report_table(doc)
    elif "reports" in doc:
        for rep in doc["reports"]:
            _print_report_table(rep)
            print()
        print(f"overall: {'PASS' if doc['pass'] else 'FAIL'}")
    else:
        for key, value in doc.items():
            print(f"{key:>24}: {value}")


def _print_report_table(rep: dict) -> None:
    inst = rep.get("instance", {})
    head = ", ".join(f"{k}={inst[k]}" for k in ("seed", "n", "m", "rankK", "kind")
                     if inst.get(k) is not None)
    print(f"instance: {head or '(file)'}")
    print(f"{'check':<30} {'hyp':<5} {'ok':<5} {'residual':<13} tolerance")
    for c in rep["checks"]:
        res = "-" if c["residual"] is None else f"{c['residual']:.3e}"
        print(f"{c['name']:<30} {str(c['hypothesisMet']):<5} "
              f"{str(c['conclusionHolds']):<5} {res:<13} {c['tolerance']:.1e}")
    print(f"pass: {rep['pass']}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    inst = verify.gen_instance(args.seed, args.n, args.m, args.rank, args.kind)
    fileio.save_instance(inst, args.output)
    _emit({"written": args.output, **inst.meta()}, args.human)
    return 0


def cmd_bounds(args) -> int:
    inst = fileio.parse_instance_file(args.file)
    cert = frames.k_frame_bounds(inst.f, inst.k, tol=_tol(args))
    doc = {
        "aOpt": cert.a_opt,
        "bOpt": cert.b_opt,
        "isBessel": cert.is_bessel,
        "isKFrame": cert.is_k_frame,
        "isParsevalK": cert.is_parseval_k,
        "residuals": cert.residuals,
    }
    _emit(doc, args.human)
    return 0 if cert.is_k_frame else 1


def cmd_check_dual(args) -> int:
    inst = fileio.parse_instance_file(args.file)
    if inst.g is None:
        raise fileio.InstanceFileError("missing-field", "check-dual needs a G family")
    tol = _tol(args)
    ok, res = duals.is_k_dual(inst.f, inst.g, inst.k, tol=tol)
    _emit({"isKDual": ok, "residual": res, "tolerance": tol}, args.human)
    return 0 if ok else 1


def cmd_canonical(args) -> int:
    inst = fileio.parse_instance_file(args.file)
    tol = _tol(args)
    g_can, f_proj = duals.canonical_k_dual(inst.f, inst.k, tol=tol)
    res = duals.duality_residual(f_proj, g_can, inst.k)
    out = verify.Instance(
        seed=inst.seed, n=inst.n, m=inst.m, rank_k=inst.rank_k,
        kind="exact-dual", k=inst.k, f=f_proj, g=g_can,
    )
    fileio.save_instance(out, args.output)
    _emit({"written": args.output, "dualityResidual": res, "tolerance": tol}, args.human)
    return 0 if res <= tol else 1


def cmd_approx(args) -> int:
    inst = fileio.parse_instance_file(args.file)
    if inst.g is None:
        raise fileio.InstanceFileError("missing-field", "approx needs a G family")
    deficit, ok = duals.approx_deficit(inst.f, inst.g, inst.k)
    _emit({"deficit": deficit, "isApproxDual": ok}, args.human)
    return 0 if ok else 1


def cmd_suite(args) -> int:
    tol = _tol(args)
    if args.random is not None:
        rng = np.random.default_rng(args.seed)
        reports = []
        for _ in range(args.random):
            sub_seed = int(rng.integers(0, 2**63 - 1))
            n = int(rng.integers(2, 7))
            m = int(rng.integers(n, 2 * n + 1))
            rank = int(rng.integers(1, n + 1))
            kind = verify.KINDS[int(rng.integers(0, len(verify.KINDS)))]
            inst = verify.gen_instance(sub_seed, n, m, rank, kind)
            reports.append(verify.run_suite(inst, tol=tol))
        doc = {
            "reports": [r.to_dict() for r in reports],
            "pass": all(r.passed for r in reports),
        }
        _emit(doc, args.human)
        return 0 if doc["pass"] else 1
    if args.file is None:
        print("suite: provide an instance FILE or --random COUNT", file=sys.stderr)
        return 2
    inst = fileio.parse_instance_file(args.file)
    report = verify.run_suite(inst, tol=tol)
    _emit(report.to_dict(), args.human)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatframes",
        description="quaternionic K-frame constructions and theorem verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--human", action="store_true",
                       help="plain-text table instead of JSON")
        p.add_argument("--tol", type=float, default=None,
                       help="override the verification tolerance "
                            "(default 1e-8, or QUATFRAME_TOL)")

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--kind", choices=verify.KINDS, default="exact-dual")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bounds", help="optimal frame bounds and classification")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("check-dual", help="test the exact duality identity")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_check_dual)

    p = sub.add_parser("canonical", help="construct the canonical dual pair")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("approx", help="approximate-duality deficit")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("suite", help="run the full verification suite")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--random", type=int, default=None, metavar="COUNT")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except fileio.InstanceFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
