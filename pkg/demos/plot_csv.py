"""
Plot sweep CSVs
===============

    python demos/plot_csv.py out.csv [more.csv ...] [--save fig.png]

Solid lines are the analytical columns, markers the Monte-Carlo ones.
Needs matplotlib (``pip install .[plot]``).
"""

import argparse
from pathlib import Path

import matplotlib.pyplot as plt

from dris_noma import read_csv

parser = argparse.ArgumentParser()
parser.add_argument("csv", nargs="+")
parser.add_argument("--save")
args = parser.parse_args()

fig, ax = plt.subplots()
for path in args.csv:
    rows = read_csv(path)
    x = [r["axis_value"] for r in rows]
    for metric in ("op_i", "op_o", "ec_i", "ec_o", "sum_rate"):
        if f"{metric}_mc" not in rows[0]:
            continue
        label = f"{Path(path).stem} {metric}"
        line, = ax.plot(x, [r[f"{metric}_ana"] for r in rows], label=label)
        ax.plot(x, [r[f"{metric}_mc"] for r in rows], "o", color=line.get_color(), ms=3)
    ax.set_xlabel(rows[0]["axis_name"])
if any("op_" in k for k in read_csv(args.csv[0])[0]):
    # outage below 1e-5 is beyond what 1e5 trials can resolve anyway
    ax.set_yscale("log")
    ax.set_ylim(1e-5, 1.5)
ax.legend(fontsize=7)
if args.save:
    fig.savefig(args.save, dpi=150)
else:
    plt.show()
