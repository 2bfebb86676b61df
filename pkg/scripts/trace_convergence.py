"""Monte Carlo error of the trace estimator as the sample count grows.

For each norm family, draws one random matrix, runs the estimator on a
geometric sample schedule and writes one CSV row per (norm, n). The error
should shrink like n^(-1/2) and stay within a few stderr of zero.

    python3 scripts/trace_convergence.py --dim 4 --out convergence.csv
"""

import argparse
import sys

import numpy as np

from symtrace import NormSpec
from symtrace.lab import TraceExperimentConfig, convergence_study, write_csv


def families(dim):
    specs = [NormSpec.euclidean(dim), NormSpec.lp(1.5, dim), NormSpec.lp(3, dim), NormSpec.l1(dim), NormSpec.linf(dim)]
    if dim >= 2:
        specs.append(NormSpec.top_k(2, dim))
    return specs


def main(argv=None):
    ap = argparse.ArgumentParser(description="trace estimator convergence across norm families")
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--schedule", default="1000,10000,100000,1000000")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    args = ap.parse_args(argv)

    schedule = [int(s) for s in args.schedule.split(",")]
    A = np.random.default_rng(args.seed).uniform(-1.0, 1.0, (args.dim, args.dim))
    trace = float(np.trace(A))
    rows = []
    for spec in families(args.dim):
        cfg = TraceExperimentConfig(spec, A, seed=args.seed, workers=args.workers)
        for r in convergence_study(cfg, schedule):
            err = r.estimate - trace
            rows.append((str(spec), r.n_samples, trace, r.estimate, r.stderr, err, abs(err) / r.stderr))
    write_csv(args.out or sys.stdout, ["norm", "n_samples", "trace", "estimate", "stderr", "error", "z"], rows)


if __name__ == "__main__":
    main()
