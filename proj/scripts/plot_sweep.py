#!/usr/bin/env python3
"""Render BER/NMSE curves from icc-sim sweep CSVs.

Usage: plot_sweep.py sweep.csv [more.csv ...] [-o curves.png]
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def load(paths):
    rows = []
    for path in paths:
        with open(path, newline="") as fh:
            rows.extend(csv.DictReader(fh))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csvs", nargs="+")
    parser.add_argument("-o", "--out", default="curves.png")
    args = parser.parse_args()

    rows = load(args.csvs)
    series = defaultdict(list)
    for row in rows:
        key = (row["scenario"], row["variant"])
        series[key].append(
            (float(row["snr_db"]), float(row["ber"]), float(row["nmse"]))
        )

    fig, (ax_ber, ax_nmse) = plt.subplots(1, 2, figsize=(11, 4.5))
    for (scenario, variant), points in sorted(series.items()):
        points.sort()
        snr = [p[0] for p in points]
        ber = [p[1] for p in points]
        nmse = [p[2] for p in points]
        label = f"{scenario} {variant}"
        style = "--" if variant.startswith("genie") else "-"
        if any(b > 0 for b in ber):
            ax_ber.semilogy(snr, [max(b, 1e-12) for b in ber], style, marker="o", label=label)
        if any(v > 0 for v in nmse):
            ax_nmse.semilogy(snr, [max(v, 1e-12) for v in nmse], style, marker="s", label=label)

    for ax, title in ((ax_ber, "BER"), (ax_nmse, "NMSE")):
        ax.set_xlabel("SNR [dB]")
        ax.set_title(title)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
