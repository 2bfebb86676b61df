"""Command line interface: ``symtrace <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .hyperoctahedral import ExactMatrix, conjugation_constant, conjugation_sum, group_order
from .lab import (
    METHODS,
    TraceExperimentConfig,
    convergence_rows,
    convergence_study,
    ellipse_counterexample,
    estimate_trace,
    load_matrix,
    write_csv,
)
from .measure import DEFAULT_BATCHES
from .norms import parse_norm_spec


def _comma_floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _comma_ints(text):
    return [int(float(v)) for v in text.split(",") if v.strip()]


def _emit_json(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_trace_estimate(args):
    config = TraceExperimentConfig(
        norm=parse_norm_spec(args.norm),
        matrix=load_matrix(args.matrix),
        n_samples=args.samples,
        seed=args.seed,
        n_batches=args.batches,
        method=args.method,
        workers=args.workers,
    )
    report = estimate_trace(config)
    _emit_json(report.to_dict(), args.out)
    return 0


def cmd_group_verify(args):
    rng = np.random.default_rng(args.seed)
    n = args.dim
    failures = 0
    for trial in range(args.trials):
        a = ExactMatrix.from_rows(rng.integers(-9, 10, size=(n, n)).tolist())
        total = conjugation_sum(a)
        expected = ExactMatrix.scalar(conjugation_constant(a), n)
        ok = total == expected
        failures += not ok
        print(f"trial {trial}: tr A = {a.trace()}, constant = {conjugation_constant(a)}, {'ok' if ok else 'MISMATCH'}")
    print(f"dim {n}: |BC_{n}| = {group_order(n)}, {args.trials - failures}/{args.trials} trials exact")
    return 1 if failures else 0


def cmd_ellipse(args):
    table = ellipse_counterexample(args.b, args.tol)
    write_csv(args.out if args.out else sys.stdout, ["b", "average"], table)
    return 0


def cmd_convergence(args):
    matrix = load_matrix(args.matrix)
    config = TraceExperimentConfig(
        norm=parse_norm_spec(args.norm),
        matrix=matrix,
        seed=args.seed,
        n_batches=args.batches,
        workers=args.workers,
    )
    reports = convergence_study(config, args.schedule)
    write_csv(args.out, ["n", "estimate", "stderr", "abs_error"], convergence_rows(reports, matrix.trace()))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="symtrace", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace-estimate", help="estimate tr A by integrating over a unit sphere")
    p.add_argument("--norm", required=True, help="norm spec, e.g. lp:3:4 or wl2:1,0.5")
    p.add_argument("--matrix", required=True, type=Path, help="matrix file (JSON or CSV)")
    p.add_argument("--samples", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--batches", type=int, default=DEFAULT_BATCHES)
    p.add_argument("--method", choices=METHODS, default="montecarlo")
    p.add_argument("--workers", type=int, default=1, help="threads; output does not depend on it")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_trace_estimate)

    p = sub.add_parser("group-verify", help="exact conjugation-sum check over BC_N")
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_group_verify)

    p = sub.add_parser("ellipse", help="average of x^2 over the ellipse (cos t, b sin t)")
    p.add_argument("--b", required=True, type=_comma_floats, help="comma-separated b values in [0, 1]")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_ellipse)

    p = sub.add_parser("convergence", help="Monte Carlo trace estimates over a sample schedule")
    p.add_argument("--norm", required=True)
    p.add_argument("--matrix", required=True, type=Path)
    p.add_argument("--schedule", required=True, type=_comma_ints)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--batches", type=int, default=DEFAULT_BATCHES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_convergence)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"symtrace {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
