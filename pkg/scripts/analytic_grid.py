"""Run the analytic grid checks over a family of (r, s, M) and summarize per claim."""

import argparse
import math
import os
from collections import defaultdict

import numpy as np

from cliquedensity.analytic import make_params, smallness_supremum, verify_analytic_claims


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-max", type=int, default=6)
    ap.add_argument("--s-max", type=int, default=10)
    ap.add_argument("--m-steps", type=int, default=4, help="M values between 1 and 0.999 * supremum")
    ap.add_argument("--m-cap", type=float, default=2.0, help="used when the supremum is infinite")
    ap.add_argument("--grid", type=int, default=101)
    ap.add_argument("--csv", default="results/analytic_grid.csv")
    args = ap.parse_args()

    os.makedirs(os.path.dirname(args.csv) or ".", exist_ok=True)
    worst = defaultdict(lambda: math.inf)
    n_sets = 0
    with open(args.csv, "w", newline="") as fh:
        fh.write("r,s,M,claim,interval,status,worst_slack,witness\n")
        for r in range(3, args.r_max + 1):
            for s in range(r - 1, args.s_max + 1):
                sup = smallness_supremum(r, s)
                top = 0.999 * (args.m_cap if math.isinf(sup) else sup)
                for M in np.linspace(1.0, top, args.m_steps):
                    rep = verify_analytic_claims(make_params(r, s, M), args.grid)
                    n_sets += 1
                    for line in rep.to_csv().splitlines()[1:]:
                        fh.write(f"{r},{s},{M:.15g},{line}\n")
                    for res in rep.results:
                        worst[res.claim] = min(worst[res.claim], res.worst_slack)
                    if not rep.passed:
                        print(f"FAIL r={r} s={s} M={M}: {[f.claim for f in rep.failures()]}")
    print(f"{n_sets} parameter sets -> {args.csv}")
    for claim, w in worst.items():
        print(f"  {claim:<20} worst slack {w: .3e}")


if __name__ == "__main__":
    main()
