"""Tabulate the arc-length average of x^2 over the ellipse (cos t, b sin t).

At b = 1 the curve is the unit circle and the average is 1/2. Any other
value means the averaging formula fails for diag(1, 0) once the unit ball
stops being symmetric under coordinate swaps.

    python3 scripts/ellipse_table.py --out ellipse.csv
"""

import argparse
import sys

import numpy as np

from symtrace.lab import ellipse_counterexample, write_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description="ellipse average of x^2 against b")
    ap.add_argument("--points", type=int, default=21, help="number of b values in [0, 1]")
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    args = ap.parse_args(argv)

    rows = [(b, avg, 0.5 - avg) for b, avg in ellipse_counterexample(np.linspace(0.0, 1.0, args.points), args.tol)]
    write_csv(args.out or sys.stdout, ["b", "average", "gap_from_half"], rows)


if __name__ == "__main__":
    main()
