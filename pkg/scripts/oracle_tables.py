"""Exhaustive minimum clique counts against n^r F_r(m/n^2), one CSV per (n, r)."""

import argparse
import csv
import os
import time

from cliquedensity.oracle import sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cells", default="5:3,6:3,7:3,6:4,7:4", help="comma-separated n:r pairs")
    ap.add_argument("--out", default="results/oracle")
    ap.add_argument("--workers", type=int, default=os.cpu_count())
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for cell in args.cells.split(","):
        n, r = map(int, cell.split(":"))
        t0 = time.perf_counter()
        rows = sweep(n, r, workers=args.workers)
        path = os.path.join(args.out, f"sweep_n{n}_r{r}.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "m", "r", "minimum", "bound", "slack"])
            for row in rows:
                w.writerow([row.n, row.m, row.r, row.minimum, f"{row.bound:.15g}", f"{row.slack:.15g}"])
        worst = min(row.slack for row in rows)
        tight = [row.m for row in rows if abs(row.slack) < 1e-9 and row.minimum > 0]
        print(f"n={n} r={r}: {len(rows)} rows, worst slack {worst:.3e}, tight at m={tight}, "
              f"{time.perf_counter() - t0:.2f}s -> {path}")


if __name__ == "__main__":
    main()
