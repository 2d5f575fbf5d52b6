"""Command-line entry point.

Exit codes: 0 verified / success, 1 verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from fractions import Fraction

from . import chaining, covering, discrepancy, generation
from .core import PointSet, PointSetFileError, atomic_write_text, load_pointset, save_pointset

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _emit(text: str, output: str | None) -> None:
    if output:
        atomic_write_text(output, text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _fraction(text: str) -> Fraction:
    try:
        value = covering.parse_delta(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError("delta must lie in (0, 1]")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbelow(2**32)
        print(f"seed: {seed}", file=sys.stderr)
    return seed


def cmd_bounds(args, parser) -> int:
    report = covering.bound_report(args.s, args.delta)
    _emit(_json(report.to_dict()), args.output)
    if args.s >= 2 and not report.improved:
        return EXIT_FAILED
    return EXIT_OK


def cmd_constants(args, parser) -> int:
    if args.K is not None:
        if args.s is not None or args.N is not None:
            parser.error("give either --K or --s/--N, not both")
        K = args.K
    else:
        if args.s is None or args.N is None:
            parser.error("give --K or both --s and --N")
        K = chaining.compute_K(args.s, args.N)
        if K < 2:
            parser.error(f"s={args.s}, N={args.N} give K={K} < 2; the bound holds trivially")
    if K < 2:
        parser.error("--K must be >= 2")
    table = chaining.coefficient_table(K, check=False)
    text = table.to_csv() if args.format == "csv" else _json(table.to_dict())
    _emit(text, args.output)
    if args.figure:
        from .plotting import plot_coefficients

        plot_coefficients(table, args.figure)
    return EXIT_FAILED if table.violations() else EXIT_OK


def cmd_verify(args, parser) -> int:
    if args.kmax < 3:
        parser.error("--kmax must be >= 3")
    sweep = chaining.verify_sum_all(args.kmax)
    if sweep.partial:
        print(f"warning: --kmax {args.kmax} < 31 covers only part of the direct-check range",
              file=sys.stderr)
    out = sweep.to_dict()
    if args.kmax >= 33:
        out["tail_majorant_holds"] = all(
            chaining.solve_c(k, K) <= chaining.tail_majorant(k)
            for K in range(33, args.kmax + 1)
            for k in range(32, K)
        )
    out["c_32_32"] = chaining.solve_c(32, 32)
    out["c_32_32_claimed_max"] = chaining.PAPER_C_32_32
    if args.format == "csv":
        text = "K,sum\n" + "".join(f"{K},{v:.17g}\n" for K, v in sweep.sums.items())
    else:
        text = _json(out)
    _emit(text, args.output)
    if args.figure:
        from .plotting import plot_sum_sweep

        plot_sum_sweep(sweep, args.figure)
    return EXIT_OK if sweep.all_below_8 and sweep.caps_hold else EXIT_FAILED


def cmd_discrepancy(args, parser) -> int:
    try:
        ps = load_pointset(args.input)
    except (OSError, PointSetFileError) as exc:
        parser.error(str(exc))
    if args.delta is not None:
        result = discrepancy.cover_bound_discrepancy(ps, args.delta)
    elif args.sample is not None:
        seed = _resolve_seed(args.seed)
        result = discrepancy.sampled_lower_bound(ps, args.sample, seed)
    else:
        try:
            result = discrepancy.exact_star_discrepancy(ps)
        except discrepancy.GuardExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAILED
    _emit(_json(result.to_dict()), args.output)
    return EXIT_OK


def _generate_points(args, parser, seed) -> PointSet:
    if args.kind == "uniform":
        return generation.uniform_random(args.s, args.N, seed)
    if args.kind == "equidistant":
        if args.s not in (None, 1):
            parser.error("equidistant points are one-dimensional")
        return generation.equidistant_1d(args.N)
    if args.s not in (None, 2):
        parser.error("the Hammersley set here is two-dimensional")
    return generation.hammersley_2d(args.N)


def cmd_generate(args, parser) -> int:
    if args.kind == "uniform" and args.s is None:
        parser.error("--kind uniform needs --s")
    seed = _resolve_seed(args.seed) if args.kind == "uniform" else args.seed
    if args.certify and args.kind == "uniform":
        ps, report = generation.generate_certified(
            args.s, args.N, seed, max_attempts=args.max_attempts, delta_for_sandwich=args.delta,
        )
        if ps is None:
            ps = generation.uniform_random(args.s, args.N, generation.attempt_rng(seed, 0))
    else:
        ps = _generate_points(args, parser, seed)
        report = generation.certify(ps, delta=args.delta, seed=seed) if args.certify else None
    save_pointset(ps, args.output)
    if args.figure:
        from .plotting import plot_pointset

        plot_pointset(ps, args.figure)
    if report is None:
        summary = {"kind": args.kind, "s": ps.s, "N": ps.N, "seed": seed, "output": args.output}
        sys.stdout.write(_json(summary))
        return EXIT_OK
    out = report.to_dict()
    out["kind"] = args.kind
    out["output"] = args.output
    _emit(_json(out), args.report)
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stardisc",
        description="Star-discrepancy constants, bounds and certified point sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="exact bracketing-number bounds")
    p.add_argument("--s", type=_positive, required=True)
    p.add_argument("--delta", type=_fraction, required=True, help="p/q")
    p.add_argument("--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("constants", help="coefficient table c_0..c_K")
    p.add_argument("--K", type=int)
    p.add_argument("--s", type=_positive)
    p.add_argument("--N", type=_positive)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.add_argument("--figure", help="write a PNG of c_k against k")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify", help="check sum_k c_k < 8 for K = 3..kmax")
    p.add_argument("--kmax", type=int, default=200)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.add_argument("--figure", help="write a PNG of the sum against K")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("discrepancy", help="star-discrepancy of a CSV point set")
    p.add_argument("--input", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--delta", type=_fraction)
    mode.add_argument("--sample", type=_positive, metavar="TRIALS")
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("generate", help="generate (and optionally certify) a point set")
    p.add_argument("--kind", choices=("uniform", "equidistant", "hammersley"), required=True)
    p.add_argument("--s", type=_positive)
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", required=True, help="CSV path for the points")
    p.add_argument("--certify", action="store_true")
    p.add_argument("--max-attempts", type=_positive, default=10)
    p.add_argument("--delta", type=_fraction, default=generation.DEFAULT_SANDWICH_DELTA,
                   help="cover resolution when the exact grid is too large")
    p.add_argument("--report", help="write the certificate JSON here instead of stdout")
    p.add_argument("--figure", help="write a PNG scatter of the points")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
