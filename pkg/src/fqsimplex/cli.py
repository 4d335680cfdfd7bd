"""Command line front end.

Exit codes: 0 success, 1 structured domain error (JSON on stdout),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from .charsums import MultCharacter, gauss_constant, weil_scan
from .errors import FqSimplexError
from .experiment import ExperimentConfig, bench_dft, run_threshold_experiment, write_csv
from .field import field_ctx
from .io import read_point_set, sample_set
from .isometry import build_isometry
from .simplex import DEFAULT_BUDGET, DEFAULT_C_TEST, STRATEGIES, SimplexSpec, concentration_report
from .sphere import SphereSpec, sphere_summary


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_json(obj, path):
    with _output(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_sphere(args):
    spec = SphereSpec(args.q, args.d, args.t)
    if spec.t == 0:
        raise UsageError("--t must be nonzero mod q")
    _emit_json(sphere_summary(spec, scan=args.scan), args.out)


def cmd_weil(args):
    ctx = field_ctx(args.q)
    psis = list(MultCharacter) if args.psi == "both" else [MultCharacter(args.psi)]
    reports = [weil_scan(ctx, psi).to_dict() for psi in psis]
    Q = gauss_constant(ctx).Q
    _emit_json({
        "q": args.q,
        "gauss_constant": [Q.real, Q.imag],
        "scans": reports,
        "pass": all(r["pass"] for r in reports),
    }, args.out)


def _load_set(args):
    if args.set is not None:
        e = read_point_set(args.set)
        if (args.q is not None and e.q != args.q) or (args.d is not None and e.d != args.d):
            raise UsageError(f"--set file is for q={e.q}, d={e.d}")
        return e
    if args.q is None or args.d is None:
        raise UsageError("--q and --d are required with --random")
    return sample_set(args.q, args.d, args.random, args.seed)


def cmd_count(args):
    e = _load_set(args)
    try:
        spec = SimplexSpec.from_flat(args.k, args.distances)
        spec.validate(e.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = concentration_report(e, spec, c_test=args.c_test, nondegenerate_only=args.nondegenerate,
                                  strategy=args.strategy, budget=args.budget, threads=args.threads)
    _emit_json(report.to_dict(), args.out)


def cmd_isometry(args):
    a, b = read_point_set(args.simplex_a), read_point_set(args.simplex_b)
    for e in (a, b):
        if (e.q, e.d) != (args.q, args.d):
            raise UsageError(f"simplex file is for q={e.q}, d={e.d}, expected q={args.q}, d={args.d}")
    if len(a) != len(b):
        raise UsageError("the two simplices must have the same number of vertices")
    u = build_isometry(a.points, b.points, args.q, args.d)
    _emit_json(u.to_dict(), args.out)


def cmd_experiment(args):
    if args.distances and args.distances != ["all"]:
        try:
            specs = [SimplexSpec.from_flat(args.k, _int_list(s)) for s in args.distances]
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(str(exc)) from None
    else:
        specs = "all"
    try:
        cfg = ExperimentConfig(
            q=args.q, d=args.d, k=args.k, distances=specs, densities=args.densities, trials=args.trials,
            seed=args.seed, c_test=args.c_test, random_lk=args.random_lk, budget=args.budget,
            threads=args.threads, strategy=args.strategy,
        )
        rows = run_threshold_experiment(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _output(args.out) as fh:
        write_csv(rows, fh, cfg)


def cmd_bench(args):
    _emit_json(bench_dft(args.q, args.d, args.repeats, threads=args.threads), args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fqsimplex", description="Distance configurations and character sums over F_q^d")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sphere", help="sphere size, spectrum at 0, optional decay scan")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--scan", action="store_true")
    s.set_defaults(func=cmd_sphere)

    s = sub.add_parser("weil", help="exhaustive Weil-bound scan of Kloosterman / Salie sums")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--psi", choices=["trivial", "quadratic", "both"], default="both")
    s.set_defaults(func=cmd_weil)

    s = sub.add_parser("count", help="exact simplex count with main term and residual")
    s.add_argument("--q", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--distances", type=_int_list, required=True, help="t01,t02,t12,t03,...")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--set", type=Path, help="point-set file")
    src.add_argument("--random", type=float, metavar="DENSITY")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--nondegenerate", action="store_true")
    s.add_argument("--c-test", type=float, default=DEFAULT_C_TEST)
    s.add_argument("--strategy", choices=STRATEGIES, default="auto")
    s.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("isometry", help="orthogonal affine map between congruent simplices")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--simplex-a", type=Path, required=True)
    s.add_argument("--simplex-b", type=Path, required=True)
    s.set_defaults(func=cmd_isometry)

    s = sub.add_parser("experiment", help="seeded threshold sweep, CSV output")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--distances", action="append",
                   help="'all' (default) or one comma list per flag, e.g. --distances 1,2,3")
    s.add_argument("--random-lk", type=int, help="sample this many side-length sets instead of all")
    s.add_argument("--densities", type=_float_list, default=[1.0])
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--c-test", type=float, default=DEFAULT_C_TEST)
    s.add_argument("--strategy", choices=STRATEGIES, default="auto")
    s.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("bench-dft", help="time naive vs axis-factorized transforms")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--repeats", type=int, default=3)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_bench)

    for action in sub.choices.values():
        action.add_argument("--out", help="write the report here instead of stdout")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except FqSimplexError as exc:
        _emit_json(exc.to_dict(), None)
        return 1
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
