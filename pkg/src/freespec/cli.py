"""Command-line front end: fixtures, verifications, and reports.

Exit codes: 0 for a positive verdict (member / free / success), 1 for a
certified refutation, 2 for an inconclusive outcome of a one-sided search,
64 for usage errors, 65 for malformed tuple files, 70 for numerical
failures.  Reports go to stdout as an aligned table, or as JSON with
``--json``; every numeric claim in a report traces to an operation output.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import acceptance
from .ballsets import (matrix_ball_membership, qd_membership,
                       selfdual_ball_membership, wmax_ball_membership,
                       containment_chain_experiment)
from .drops import (DropDescriptor, level1_hull_membership,
                    project_membership_special, witness_search)
from .duality import FullSpanBasis, choi_membership, dual_pencil
from .errors import (FreespecError, NumericalError, ParameterError,
                     TupleFormatError, UnsupportedCaseError)
from .extremality import Verdict, arveson_dilate, classify
from .fixtures import fixture_names, load_fixture
from .linalg import DEFAULT_TOL, HermitianTuple, ToleranceProfile
from .pencil import Pencil, ensure_bounded_flag, membership
from .spin import anticommutation_residual, spin_tuple
from .tupleio import read_tuple, write_tuple

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NUMERICAL = 70


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _common_options(parser, suppress):
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--json", action="store_true", default=default(False),
                        help="emit the report as JSON on stdout")
    parser.add_argument("--seed", type=int, default=default(None),
                        help="seed for sampled searches (default: FREESPEC_SEED or 0)")
    for name, value in (("hermitian", DEFAULT_TOL.hermitian_tol),
                        ("psd", DEFAULT_TOL.psd_tol),
                        ("rank", DEFAULT_TOL.rank_tol),
                        ("residual", DEFAULT_TOL.residual_tol),
                        ("margin", DEFAULT_TOL.membership_margin)):
        parser.add_argument(f"--tol-{name}", type=float, default=default(value),
                            help=f"override the {name} tolerance (default {value:g})")


def _build_parser():
    parser = _Parser(prog="freespec",
                     description="Free spectrahedron and matrix convex set checks")
    _common_options(parser, suppress=False)
    # The same options are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values given before it.
    common = _Parser(add_help=False)
    _common_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixture", parents=[common],
                       help="write a named fixture tuple to a JSON file")
    p.add_argument("name", help="one of: " + ", ".join(fixture_names()))
    p.add_argument("--out", required=True)

    p = sub.add_parser("membership", parents=[common],
                       help="pencil membership of a point")
    p.add_argument("--pencil", required=True)
    p.add_argument("--point", required=True)

    p = sub.add_parser("extreme", parents=[common],
                       help="extreme-point certificate for a point")
    p.add_argument("--pencil", required=True)
    p.add_argument("--point", required=True)

    p = sub.add_parser("dilate", parents=[common],
                       help="greedy dilation up to an Arveson extreme point")
    p.add_argument("--pencil", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--max-steps", type=int, default=64)
    p.add_argument("--out", help="write the dilated tuple here")

    p = sub.add_parser("spin", parents=[common],
                       help="construct a spin tuple and report residuals")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("choi", parents=[common],
                       help="matrix-range membership via the block matrix")
    p.add_argument("--basis", required=True, help="full-span coefficient tuple")
    p.add_argument("--point", required=True)

    p = sub.add_parser("dual", parents=[common],
                       help="dual pencil of a full-span tuple")
    p.add_argument("--basis", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ball", parents=[common],
                       help="membership in a ball-family set")
    p.add_argument("--set", required=True,
                   choices=["matrix", "selfdual", "wmax", "qd"])
    p.add_argument("--point", required=True)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--refine", type=int, default=25)

    p = sub.add_parser("drop", parents=[common],
                       help="projection membership (exact case or witness search)")
    p.add_argument("--pencil", required=True)
    p.add_argument("--keep", type=int, required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--iters", type=int, default=60)

    p = sub.add_parser("hull", parents=[common],
                       help="level-1 hull membership for generator tuples")
    p.add_argument("--generator", action="append", required=True,
                   help="generator tuple file/fixture (repeatable)")
    p.add_argument("--point", required=True,
                   help="comma-separated real coordinates, e.g. '0,-0.6667'")
    p.add_argument("--grid", type=int, default=720)
    p.add_argument("--refine", type=int, default=30)

    p = sub.add_parser("chain", parents=[common],
                       help="containment-chain sampling experiment")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--samples", type=int, default=200)

    sub.add_parser("verify-paper", parents=[common],
                   help="run the full acceptance suite")
    return parser


def _tolerances(args):
    return ToleranceProfile(hermitian_tol=args.tol_hermitian, psd_tol=args.tol_psd,
                            rank_tol=args.tol_rank, residual_tol=args.tol_residual,
                            membership_margin=args.tol_margin)


def _seed(args):
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("FREESPEC_SEED", "0"))


def _load(ref, length_hint=None, hermitian=True):
    """Resolve a tuple reference: a file path, a fixture name, or 'zeros'."""
    if ref == "zeros":
        if length_hint is None:
            raise ParameterError("'zeros' needs a pencil to infer the tuple length")
        return HermitianTuple(np.zeros((length_hint, 1, 1), dtype=complex))
    if os.path.exists(ref):
        tup, _ = read_tuple(ref)
        return tup
    if ref in fixture_names():
        tup, _ = load_fixture(ref)
        return tup
    raise TupleFormatError(f"{ref!r} is neither a file nor a known fixture")


def _emit(report, as_json):
    if as_json:
        print(json.dumps(report, indent=1, sort_keys=True, default=_json_default))
        return
    width = max(len(k) for k in report)
    for key, value in report.items():
        print(f"{key.ljust(width)}  {_human(value)}")


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return str(value)


def _human(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, np.ndarray):
        return np.array2string(value, precision=6)
    return str(value)


def _report(args, command, inputs, verdicts, margins=None, residuals=None,
            wall_time=0.0):
    return {
        "command": command,
        "inputs": inputs,
        "verdicts": verdicts,
        "margins": margins or {},
        "residuals": residuals or {},
        "tolerances": {
            "hermitian_tol": args.tol_hermitian, "psd_tol": args.tol_psd,
            "rank_tol": args.tol_rank, "residual_tol": args.tol_residual,
            "membership_margin": args.tol_margin,
        },
        "seed": _seed(args),
        "wall_time": wall_time,
    }


def _flatten(report):
    flat = {}
    for key, value in report.items():
        if isinstance(value, dict):
            for inner, v in value.items():
                flat[f"{key}.{inner}"] = v
        else:
            flat[key] = value
    return flat


def _run(args):
    tol = _tolerances(args)
    seed = _seed(args)
    start = time.perf_counter()

    if args.command == "fixture":
        tup, comment = load_fixture(args.name)
        write_tuple(args.out, tup, hermitian=True, comment=comment)
        report = _report(args, "fixture", {"name": args.name, "out": args.out},
                         {"written": True, "size": tup.n, "length": tup.g},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK

    if args.command == "membership":
        A = Pencil(_load(args.pencil))
        X = _load(args.point, length_hint=A.g)
        verdict = membership(A, X, tol)
        report = _report(args, "membership",
                         {"pencil": args.pencil, "point": args.point},
                         {"member": verdict.member, "boundary": verdict.boundary,
                          "kernel_dim": verdict.kernel_dim},
                         {"min_eigenvalue": verdict.min_eigenvalue},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK if verdict.member else EXIT_REFUTED

    if args.command == "extreme":
        A = Pencil(_load(args.pencil))
        X = _load(args.point, length_hint=A.g)
        ensure_bounded_flag(A, tol, seed=seed)
        cert = classify(A, X, tol)
        report = _report(args, "extreme",
                         {"pencil": args.pencil, "point": args.point},
                         {"verdict": cert.verdict.value,
                          "kernel_dim": cert.kernel_dim,
                          "commutant_dim": cert.commutant_dim,
                          "column_nullity": cert.beta_nullity_column,
                          "hermitian_nullity": cert.beta_nullity_hermitian,
                          "caveats": list(cert.caveats)},
                         {"min_eigenvalue": cert.min_eigenvalue,
                          "smallest_nonzero_singular": cert.smallest_nonzero_singular},
                         cert.residuals,
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK if cert.verdict == Verdict.FREE else EXIT_REFUTED

    if args.command == "dilate":
        A = Pencil(_load(args.pencil))
        X = _load(args.point, length_hint=A.g)
        result = arveson_dilate(A, X, max_steps=args.max_steps, tol=tol)
        if args.out and result.success:
            write_tuple(args.out, result.point, comment="arveson dilation output")
        report = _report(args, "dilate",
                         {"pencil": args.pencil, "point": args.point},
                         {"success": result.success, "steps": len(result.steps),
                          "final_size": result.size,
                          "failure_reason": result.failure_reason},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK if result.success else EXIT_INCONCLUSIVE

    if args.command == "spin":
        tup = spin_tuple(args.g)
        residual = anticommutation_residual(tup)
        if args.out:
            write_tuple(args.out, tup, comment=f"spin tuple of length {args.g}")
        report = _report(args, "spin", {"g": args.g, "out": args.out},
                         {"size": tup.n, "length": tup.g},
                         residuals={"anticommutation_residual": residual},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK

    if args.command == "choi":
        basis = FullSpanBasis(_load(args.basis), tol)
        X = _load(args.point, length_hint=basis.g)
        verdict = choi_membership(basis, X, tol)
        report = _report(args, "choi", {"basis": args.basis, "point": args.point},
                         {"member": verdict.member, "boundary": verdict.boundary,
                          "kernel_dim": verdict.kernel_dim},
                         {"min_eigenvalue": verdict.min_eigenvalue},
                         {"reconstruction_residual": basis.reconstruction_residual()},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK if verdict.member else EXIT_REFUTED

    if args.command == "dual":
        basis = FullSpanBasis(_load(args.basis), tol)
        B = dual_pencil(basis, tol)
        write_tuple(args.out, B, comment=f"dual pencil of {args.basis}")
        report = _report(args, "dual", {"basis": args.basis, "out": args.out},
                         {"written": True, "size": B.n, "length": B.g},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK

    if args.command == "ball":
        if args.set == "qd":
            raw, _ = (read_tuple(args.point) if os.path.exists(args.point)
                      else (load_fixture(args.point)[0].mats, None))
            mats = raw.mats if isinstance(raw, HermitianTuple) else raw
            verdict = qd_membership(mats, grid=args.grid, refine_steps=args.refine,
                                    seed=seed, tol=tol)
        else:
            X = _load(args.point)
            if args.set == "matrix":
                verdict = matrix_ball_membership(X, tol)
            elif args.set == "selfdual":
                verdict = selfdual_ball_membership(X, tol)
            else:
                verdict = wmax_ball_membership(X, grid=args.grid,
                                               refine_steps=args.refine,
                                               seed=seed, tol=tol)
        report = _report(args, "ball", {"set": args.set, "point": args.point},
                         {"member": verdict.member, "heuristic": verdict.heuristic,
                          "witness_direction":
                              None if verdict.certificate is None
                              else np.asarray(verdict.certificate).tolist()},
                         {"margin": verdict.margin},
                         wall_time=time.perf_counter() - start)
        if not verdict.member:
            return report, EXIT_REFUTED
        return report, EXIT_INCONCLUSIVE if verdict.heuristic else EXIT_OK

    if args.command == "drop":
        A = Pencil(_load(args.pencil))
        drop = DropDescriptor(A, args.keep)
        X = _load(args.point, length_hint=args.keep)
        try:
            verdict = project_membership_special(drop, X, tol, seed=seed)
            report = _report(args, "drop",
                             {"pencil": args.pencil, "keep": args.keep,
                              "point": args.point, "mode": "registered-exact"},
                             {"member": verdict.member, "boundary": verdict.boundary},
                             {"min_eigenvalue": verdict.min_eigenvalue},
                             wall_time=time.perf_counter() - start)
            return report, EXIT_OK if verdict.member else EXIT_REFUTED
        except UnsupportedCaseError:
            result = witness_search(drop, X, restarts=args.restarts,
                                    iters=args.iters, seed=seed, tol=tol)
            report = _report(args, "drop",
                             {"pencil": args.pencil, "keep": args.keep,
                              "point": args.point, "mode": "witness-search"},
                             {"witness_found": result.found,
                              "restarts_used": result.restarts_used},
                             {"best_infeasibility": result.best_infeasibility},
                             wall_time=time.perf_counter() - start)
            return report, EXIT_OK if result.found else EXIT_INCONCLUSIVE

    if args.command == "hull":
        generators = [_load(ref) for ref in args.generator]
        y = np.array([float(v) for v in args.point.split(",")])
        verdict = level1_hull_membership(generators, y, grid=args.grid,
                                         refine_steps=args.refine, seed=seed, tol=tol)
        report = _report(args, "hull",
                         {"generators": list(args.generator), "point": args.point},
                         {"member": verdict.member,
                          "separating_direction":
                              None if verdict.separating_direction is None
                              else verdict.separating_direction.tolist()},
                         {"margin": verdict.margin},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK if verdict.member else EXIT_REFUTED

    if args.command == "chain":
        result = containment_chain_experiment(args.g, samples=args.samples,
                                              seed=seed, tol=tol)
        report = _report(args, "chain", {"g": args.g, "samples": args.samples},
                         {"violations": list(result.violations),
                          "witness_in_matrix_ball": result.witness_in_matrix_ball,
                          "notes": list(result.notes)},
                         {"witness_pencil_top": result.witness_pencil_top_eigenvalue},
                         wall_time=time.perf_counter() - start)
        return report, EXIT_OK if not result.violations else EXIT_REFUTED

    if args.command == "verify-paper":
        results = acceptance.run_acceptance(tol=tol, seed=seed)
        for r in results:
            print(r.line())
        all_passed = all(r.passed for r in results)
        report = _report(args, "verify-paper", {},
                         {f"criterion_{r.number}": "pass" if r.passed else "FAIL"
                          for r in results},
                         wall_time=time.perf_counter() - start)
        report["all_passed"] = all_passed
        return report, EXIT_OK if all_passed else EXIT_REFUTED

    raise _UsageError(f"unknown command {args.command!r}")


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, code = _run(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TupleFormatError as exc:
        print(f"tuple file error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FreespecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(_flatten(report), args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
