"""Cavity-photon probability traces: stationary state vs excited emitter.

Reads two trajectory CSVs from `halfcavity evolve` (first the stationary
run, then the initially-excited-emitter run) and overlays p_c against time
in Rabi periods.
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
                    help="trajectory CSV; pass twice (stationary, excited)")
    ap.add_argument("--out", required=True)
    ap.add_argument("--dpi", type=float, default=150)
    args = ap.parse_args(argv)

    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    labels = ["stationary state", "excited emitter"]
    styles = ["k-", "g-"]
    for path, label, style in zip(args.input, labels, styles):
        cols, data = load_csv(path, "trajectory")
        t = column(cols, data, "t")
        p_c = column(cols, data, "p_c")
        ax.plot(t / TWO_PI, p_c, style, label=label)
    ax.set_xlabel(r"$t \,/\, \tau_g$")
    ax.set_ylabel(r"$|c_c(t)|^2$")
    ax.legend(frameon=False)
    fig.tight_layout()
    save(fig, args.out, args.dpi)


def main():
    sys.exit(run_script(render))


if __name__ == "__main__":
    main()
