"""Perturbed-stationary-state probability panels for two damping ratios.

Reads two trajectory CSVs (strong coupling first, weak coupling second)
and draws the emitter and cavity probabilities in a 2x2 grid.
"""

import argparse
import sys

import matplotlib.pyplot as plt
import numpy as np

from .common import column, load_csv, run_script, save

TWO_PI = 2.0 * np.pi


def render(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", action="append", required=True,
                    help="trajectory CSV; pass twice, one per damping ratio")
    ap.add_argument("--label", action="append", default=None,
                    help="panel-column label, one per input")
    ap.add_argument("--out", required=True)
    ap.add_argument("--dpi", type=float, default=150)
    args = ap.parse_args(argv)

    labels = args.label or [f"run {i + 1}" for i in range(len(args.input))]
    fig, axes = plt.subplots(2, len(args.input), figsize=(7.0, 4.2),
                             sharex="col", squeeze=False)
    for j, (path, label) in enumerate(zip(args.input, labels)):
        cols, data = load_csv(path, "trajectory")
        t = column(cols, data, "t") / TWO_PI
        axes[0][j].plot(t, column(cols, data, "p_e"), "C0-")
        axes[1][j].plot(t, column(cols, data, "p_c"), "C3-")
        axes[0][j].set_title(label)
        axes[1][j].set_xlabel(r"$t \,/\, \tau_g$")
    axes[0][0].set_ylabel(r"$|c_e(t)|^2$")
    axes[1][0].set_ylabel(r"$|c_c(t)|^2$")
    fig.tight_layout()
    save(fig, args.out, args.dpi)


def main():
    sys.exit(run_script(render))


if __name__ == "__main__":
    main()
