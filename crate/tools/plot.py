#!/usr/bin/env python3
"""Render output/angle/control figures from trajectory CSVs.

Usage:
    python3 tools/plot.py <out_dir> [--scenario NAME] [--save DIR]

Reads every `<scenario>_<controller>.csv` in <out_dir> (the directory written
by `afsmc run --out <out_dir>`), groups files by scenario, and draws the two
regulated outputs plus the control input, overlaying controllers when a
scenario was run with both. With --save the figures are written as PNG
instead of shown interactively.
"""

import argparse
import collections
import csv
import pathlib
import re
import sys

import matplotlib

FILE_RE = re.compile(r"^(?P<scenario>.+)_(?P<controller>afsmc|smc)\.csv$")

OUTPUT_LABELS = {
    "pendulum": ("pole angle x1 (rad)", "cart position x3 (m)"),
    "tora": ("platform position x1 (m)", "rotor angle x3 (rad)"),
}


def read_csv(path):
    cols = collections.defaultdict(list)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for key, value in row.items():
                cols[key].append(float(value))
    return cols


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", type=pathlib.Path)
    parser.add_argument("--scenario", action="append", default=None)
    parser.add_argument("--save", type=pathlib.Path, default=None)
    args = parser.parse_args()

    if args.save:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    runs = collections.defaultdict(dict)
    for path in sorted(args.out_dir.glob("*.csv")):
        match = FILE_RE.match(path.name)
        if not match:
            continue
        scenario = match.group("scenario")
        if args.scenario and scenario not in args.scenario:
            continue
        runs[scenario][match.group("controller")] = read_csv(path)

    if not runs:
        sys.exit(f"no trajectory CSVs found in {args.out_dir}")

    for scenario, controllers in runs.items():
        kind = "tora" if scenario.startswith("tora") else "pendulum"
        label_x1, label_x3 = OUTPUT_LABELS[kind]
        fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
        fig.suptitle(scenario)
        for name, data in sorted(controllers.items()):
            style = "-" if name == "afsmc" else "--"
            axes[0].plot(data["t"], data["x1"], style, label=name)
            axes[1].plot(data["t"], data["x3"], style, label=name)
            axes[2].plot(data["t"], data["u"], style, label=name)
        axes[0].set_ylabel(label_x1)
        axes[1].set_ylabel(label_x3)
        axes[2].set_ylabel("control input u")
        axes[2].set_xlabel("t (s)")
        for ax in axes:
            ax.grid(True, alpha=0.3)
            ax.legend()
        fig.tight_layout()
        if args.save:
            args.save.mkdir(parents=True, exist_ok=True)
            target = args.save / f"{scenario}.png"
            fig.savefig(target, dpi=130)
            print(f"wrote {target}")
            plt.close(fig)

    if not args.save:
        plt.show()


if __name__ == "__main__":
    main()
