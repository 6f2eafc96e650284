#!/usr/bin/env python3
"""Summarize `submod bench` output: 25th/50th/75th percentiles of relative
size and relative quality per epsilon, optionally plotted."""

import argparse
import csv
import statistics
from collections import defaultdict


def quartiles(xs):
    if len(xs) == 1:
        return xs[0], xs[0], xs[0]
    q = statistics.quantiles(xs, n=4, method="inclusive")
    return q[0], q[1], q[2]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv")
    ap.add_argument("--plot", help="write a PNG with percentile bands (needs matplotlib)")
    args = ap.parse_args()

    groups = defaultdict(lambda: ([], []))
    with open(args.csv, newline="") as fh:
        for row in csv.DictReader(fh):
            size, quality = groups[float(row["epsilon"])]
            size.append(float(row["relative_size"]))
            quality.append(float(row["relative_quality"]))

    eps = sorted(groups)
    summary = {e: (quartiles(groups[e][0]), quartiles(groups[e][1])) for e in eps}
    print("epsilon,size_p25,size_p50,size_p75,quality_p25,quality_p50,quality_p75")
    for e in eps:
        s, q = summary[e]
        print(",".join(f"{v:.6g}" for v in (e, *s, *q)))

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        for ax, idx, label in ((axes[0], 1, "relative quality"), (axes[1], 0, "relative size")):
            lo = [summary[e][idx][0] for e in eps]
            mid = [summary[e][idx][1] for e in eps]
            hi = [summary[e][idx][2] for e in eps]
            ax.fill_between(eps, lo, hi, alpha=0.3)
            ax.plot(eps, mid, marker="o")
            ax.set_xlabel("epsilon")
            ax.set_ylabel(label)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)


if __name__ == "__main__":
    main()
