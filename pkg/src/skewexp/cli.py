"""Command-line interface: ``skewexp <command> [options]``.

Exit codes: 0 success, 2 domain error (not invertible, branch cut, bad
arguments), 3 numerical non-convergence, 4 input/output failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings

import numpy as np

from . import bench
from .dexp import InverseCoreMapCache, l_map, l_map_inverse
from .errors import ConvergenceError, DomainError, LabelingError, NotInvertibleError, SkewExpError
from .expmaps import exp_skew, log_so
from .locus import dist_to_locus
from .matcore import MatrixFormatError, random_skew, read_matrix, skew, write_matrix
from .nearlog import ClosedFormCurve, load_curve, nearby_log, track_curve, write_trajectory_csv
from .schur import schur_skew

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_IO = 0, 2, 3, 4


def _sizes(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}") from exc


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewexp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, help="dimension of a random input when no file is given")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", help="output file (default: stdout)")
        sp.add_argument("--json", action="store_true", help="JSON output and JSON error payloads")
        return sp

    common(sub.add_parser("schur", help="Schur angles and vectors of A")).add_argument("--input-a")
    common(sub.add_parser("exp", help="exp(A)")).add_argument("--input-a")
    common(sub.add_parser("log", help="principal logarithm of Q")).add_argument("--input-q")
    for name, helptext in (("dexp", "dexp_A[X] = exp(A) L_A(X)"), ("dexpinv", "X with L_A(X) = Y")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--input-a")
        sp.add_argument("--input-x", help="direction X (dexp) or skew Y (dexpinv)")
        sp.add_argument("--force", action="store_true", help="project out rank-deficient pairs")
    common(sub.add_parser("dist", help="distance to the tangent conjugate locus")).add_argument("--input-a")
    sp = common(sub.add_parser("nearlog", help="nearby logarithm of Q around the seed A"))
    sp.add_argument("--input-a")
    sp.add_argument("--input-q")
    sp = common(sub.add_parser("track", help="track A(t) with exp(A(t)) = Q(t)"))
    sp.add_argument("--input-q", required=True, help="Q0 file (with --input-x) or directory with manifest.json")
    sp.add_argument("--input-x", help="Y file for the curve Q0 exp(tY)")
    sp.add_argument("--input-a", help="starting logarithm (default: principal log of Q(0))")
    sp = common(sub.add_parser("bench", help="timing benchmark, CSV per trial"))
    sp.add_argument("--suite", choices=sorted(bench.SUITES), default="dexp_skew")
    sp.add_argument("--sizes", type=_sizes, default=[10, 50, 100])
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--formula", action="append", help="restrict to a formula (repeatable)")
    sp = common(sub.add_parser("error", help="accuracy against extended-precision oracles"))
    sp.add_argument("--suite", choices=["dexp", "dexpinv", "expm"], default="expm")
    sp.add_argument("--sizes", type=_sizes, default=[10, 50, 100])
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--fd-step", type=float, default=1e-6, help="central-difference step of the dexp oracle")
    return p


def _load_skew(path, args, what="A"):
    if path:
        return skew(read_matrix(path))
    if args.n is None:
        raise DomainError(f"give --input-{what.lower()} or --n for a random {what}")
    return random_skew(args.n, args.seed if what == "A" else args.seed + 1)


def _emit_matrix(args, M, comment=None):
    if args.json:
        _emit_json(args, {"rows": M.shape[0], "cols": M.shape[1], "data": M.tolist()})
    elif args.output:
        write_matrix(args.output, M, comment)
    else:
        write_matrix(sys.stdout, M, comment)


def _emit_json(args, obj):
    text = json.dumps(obj, indent=None) + "\n"
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise MatrixFormatError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _open_out(args):
    if not args.output:
        return sys.stdout, False
    try:
        return open(args.output, "w", newline="", encoding="utf-8"), True
    except OSError as exc:
        raise MatrixFormatError(f"cannot write {args.output}: {exc}") from exc


def cmd_schur(args):
    s = schur_skew(_load_skew(args.input_a, args))
    if args.json:
        _emit_json(args, {"theta": s.theta.tolist(), "R": s.R.tolist()})
    else:
        _emit_matrix(args, s.R, "theta: " + " ".join(repr(float(t)) for t in s.theta))


def cmd_exp(args):
    _emit_matrix(args, exp_skew(_load_skew(args.input_a, args)))


def cmd_log(args):
    if args.input_q:
        Q = read_matrix(args.input_q)
    elif args.n is not None:
        Q = exp_skew(random_skew(args.n, args.seed))
    else:
        raise DomainError("give --input-q or --n")
    _emit_matrix(args, log_so(Q))


def cmd_dexp(args):
    A = _load_skew(args.input_a, args)
    X = _load_skew(args.input_x, args, "X")
    s = schur_skew(A)
    _emit_matrix(args, exp_skew(A, s) @ l_map(s, X))


def cmd_dexpinv(args):
    A = _load_skew(args.input_a, args)
    Y = _load_skew(args.input_x, args, "X")
    s = schur_skew(A)
    cache = InverseCoreMapCache.build(s.theta, s.n)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        X = l_map_inverse(s, Y, cache=cache, force=args.force)
    _emit_matrix(args, X)


def cmd_dist(args):
    d = dist_to_locus(schur_skew(_load_skew(args.input_a, args)), with_point=False)
    obj = d.to_dict()
    if obj["dist"] == float("inf"):
        obj["dist"] = "inf"
    _emit_json(args, obj)


def cmd_nearlog(args):
    A0 = _load_skew(args.input_a, args)
    if args.input_q:
        Q = read_matrix(args.input_q)
    else:
        raise DomainError("nearlog needs --input-q")
    _emit_matrix(args, nearby_log(A0, Q))


def cmd_track(args):
    curve = load_curve((args.input_q, args.input_x)) if args.input_x else load_curve(args.input_q)
    A_start = skew(read_matrix(args.input_a)) if args.input_a else log_so(curve(0.0))
    path = track_curve(curve, A_start)
    fh, close = _open_out(args)
    try:
        write_trajectory_csv(path, fh)
    finally:
        if close:
            fh.close()
    print(f"samples={len(path)} crossings={path.crossings}", file=sys.stderr)


def cmd_bench(args):
    records = bench.bench_suite(args.suite, args.sizes, args.seed, args.trials, args.formula)
    fh, close = _open_out(args)
    try:
        bench.write_records(records, fh)
    finally:
        if close:
            fh.close()
    means = bench.summarize(records)
    print(f"{'formula':<12} {'n':>6} {'stage':<11} {'mean_s':>12}", file=sys.stderr)
    for (f, n, stage), v in sorted(means.items(), key=lambda kv: (kv[0][1], kv[0][0], kv[0][2])):
        print(f"{f:<12} {n:>6} {stage:<11} {v:12.6e}", file=sys.stderr)
        if v < 1e-6:
            print(f"warning: {f} n={n} {stage} is below timer resolution", file=sys.stderr)


def cmd_error(args):
    rows = bench.error_suite(args.suite, args.sizes, args.seed, args.trials, args.fd_step)
    fh, close = _open_out(args)
    try:
        w = csv.writer(fh)
        w.writerow(bench.ERROR_HEADER)
        for f, n, trial, err in rows:
            w.writerow([f, n, trial, repr(err)])
    finally:
        if close:
            fh.close()


COMMANDS = {
    "schur": cmd_schur,
    "exp": cmd_exp,
    "log": cmd_log,
    "dexp": cmd_dexp,
    "dexpinv": cmd_dexpinv,
    "dist": cmd_dist,
    "nearlog": cmd_nearlog,
    "track": cmd_track,
    "bench": cmd_bench,
    "error": cmd_error,
}


def _fail(args, code, exc):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, NotInvertibleError):
        payload["violations"] = [
            {"kind": v.kind, "i": v.i, "j": v.j, "l": v.l, "gap": v.gap} for v in exc.violations
        ]
    if getattr(args, "json", False):
        print(json.dumps(payload), file=sys.stderr)
    else:
        print(f"skewexp: {payload['error']}: {payload['message']}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (MatrixFormatError, OSError) as exc:
        return _fail(args, EXIT_IO, exc)
    except DomainError as exc:
        return _fail(args, EXIT_DOMAIN, exc)
    except (ConvergenceError, LabelingError) as exc:
        return _fail(args, EXIT_CONVERGENCE, exc)
    except SkewExpError as exc:
        return _fail(args, EXIT_CONVERGENCE, exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
