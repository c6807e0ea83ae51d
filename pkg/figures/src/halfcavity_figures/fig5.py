"""Oscillation-frequency branch diagram from a `halfcavity sweep` CSV.

Scatter of omega_osc / omega_g against log2 R, colored by branch id, with
an optional dashed vertical line at a critical damping ratio.
"""

import argparse
import sys

import matplotlib.pyplot as plt
import numpy as np

from .common import column, load_csv, run_script, save


def render(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", required=True, help="sweep CSV")
    ap.add_argument("--out", required=True)
    ap.add_argument("--dpi", type=float, default=150)
    ap.add_argument("--critical-r", type=float, default=None,
                    help="draw a dashed vertical line at log2 of this ratio")
    ap.add_argument("--title", default=None)
    args = ap.parse_args(argv)

    cols, data = load_csv(args.input, "sweep")
    log2r = column(cols, data, "log2_R")
    omega = column(cols, data, "omega_osc_over_omega_g")
    branch = column(cols, data, "branch_id").astype(int)
    marginal = column(cols, data, "marginal").astype(bool)

    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    cmap = plt.get_cmap("tab10")
    for bid in np.unique(branch[~marginal]):
        sel = (branch == bid) & ~marginal
        ax.plot(log2r[sel], omega[sel], ".", ms=2.5,
                color=cmap(int(bid) % 10))
    if marginal.any():
        ax.plot(log2r[marginal], omega[marginal], "x", ms=4, color="0.4")
    if args.critical_r is not None:
        ax.axvline(np.log2(args.critical_r), color="r", ls=":", lw=1)
    ax.set_xlabel(r"$\log_2 R$")
    ax.set_ylabel(r"$\omega_{\rm osc} \,/\, \omega_g$")
    if args.title:
        ax.set_title(args.title)
    fig.tight_layout()
    save(fig, args.out, args.dpi)


def main():
    sys.exit(run_script(render))


if __name__ == "__main__":
    main()
