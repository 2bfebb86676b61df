"""Check the orbit-average identity at random points for every symmetric family.

Averages <A Qx, (Qx)*> over all signed permutations Q and compares with
tr A / N. Prints the worst relative error per (family, N).

    python3 scripts/group_average_check.py --max-dim 5
"""

import argparse

import numpy as np

from symtrace import NormSpec
from symtrace.hyperoctahedral import group_average_numerical_value
from symtrace.norms import norm_eval


def main(argv=None):
    ap = argparse.ArgumentParser(description="orbit-average identity check")
    ap.add_argument("--max-dim", type=int, default=4)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    for n in range(2, args.max_dim + 1):
        specs = [NormSpec.euclidean(n), NormSpec.lp(1.5, n), NormSpec.lp(3, n), NormSpec.l1(n), NormSpec.linf(n), NormSpec.top_k(2, n)]
        for spec in specs:
            worst = 0.0
            for _ in range(args.trials):
                A = rng.standard_normal((n, n))
                x = rng.standard_normal(n)
                x /= norm_eval(spec, x)
                t = np.trace(A) / n
                worst = max(worst, abs(group_average_numerical_value(spec, A, x) - t) / abs(t))
            print(f"{str(spec):<14} N={n}  worst rel err {worst:.2e}")


if __name__ == "__main__":
    main()
