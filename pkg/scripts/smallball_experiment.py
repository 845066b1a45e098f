#!/usr/bin/env python3
"""Transform-scale small-deviation rate over a lambda ladder, as CSV.

Evaluates lam^(-1/2) log E[exp(-lam Sigma)] along a geometric grid and prints
it next to the index-free limit, for several process indices so the collapse
is visible in one file.

    python scripts/smallball_experiment.py --p 1 --x 1 --y 2 --out rates.csv
"""

import argparse
import sys

import numpy as np

from besqint.asymptotics import lt_rate_empirical, small_ball_targets
from besqint.laws import BesqParams


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=1.0)
    ap.add_argument("--x", type=float, default=1.0)
    ap.add_argument("--y", type=float, default=2.0)
    ap.add_argument("--indices", type=float, nargs="+", default=[-0.5, 0.0, 1.0, 3.0])
    ap.add_argument("--lam-lo", type=float, default=1e2)
    ap.add_argument("--lam-hi", type=float, default=1e8)
    ap.add_argument("--points", type=int, default=25)
    ap.add_argument("--out", type=str, default=None)
    args = ap.parse_args()

    grid = np.geomspace(args.lam_lo, args.lam_hi, args.points)
    target = small_ball_targets(BesqParams(args.indices[0], args.p), args.x, args.y)
    fh = open(args.out, "w") if args.out else sys.stdout
    fh.write("nu,lambda,rate,target\n")
    for nu in args.indices:
        series = lt_rate_empirical(BesqParams(nu, args.p), args.x, args.y, grid)
        for lam, rate in series:
            fh.write(f"{nu},{lam!r},{rate!r},{target.lt_rate!r}\n")
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
