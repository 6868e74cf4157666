#!/usr/bin/env python3
"""Plots metrics.csv files written by `probit run`, or a sweep.csv."""

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def plot_runs(paths, column, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    for path in paths:
        df = pd.read_csv(path)
        label = f"{df['scheme'].iloc[0]} beta={df['beta'].iloc[0]} {df['attack'].iloc[0]}"
        ax.plot(df["round"], df[column], label=label)
    ax.set_xlabel("round")
    ax.set_ylabel(column)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_sweep(path, out):
    df = pd.read_csv(path)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(df["value"], df["final_test_acc"], marker="o")
    ax.set_xlabel(df["axis"].iloc[0])
    ax.set_ylabel("final test accuracy")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", nargs="+", help="metrics.csv files or one sweep.csv")
    parser.add_argument("--column", default="test_acc")
    parser.add_argument("--out", default="plot.png")
    args = parser.parse_args()
    header = pd.read_csv(args.csv[0], nrows=0).columns
    if "axis" in header:
        if len(args.csv) != 1:
            sys.exit("pass a single sweep.csv")
        plot_sweep(args.csv[0], args.out)
    else:
        plot_runs(args.csv, args.column, args.out)


if __name__ == "__main__":
    main()
