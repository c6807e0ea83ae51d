"""Branch diagrams for several feedback delays, one sweep CSV per panel."""

import argparse
import sys

import matplotlib.pyplot as plt
import numpy as np

from .common import column, load_csv, run_script, save


def render(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", action="append", required=True,
                    help="sweep CSV; repeat once per delay panel")
    ap.add_argument("--label", action="append", default=None)
    ap.add_argument("--critical-r", type=float, action="append", default=None,
                    help="dashed vertical marker per panel (optional)")
    ap.add_argument("--out", required=True)
    ap.add_argument("--dpi", type=float, default=150)
    args = ap.parse_args(argv)

    n_panels = len(args.input)
    labels = args.label or [f"panel {i + 1}" for i in range(n_panels)]
    ncols = 2 if n_panels > 1 else 1
    nrows = int(np.ceil(n_panels / ncols))
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.4 * ncols, 2.6 * nrows),
                             sharex=True, sharey=True, squeeze=False)
    cmap = plt.get_cmap("tab10")
    for i, (path, label) in enumerate(zip(args.input, labels)):
        ax = axes[i // ncols][i % ncols]
        cols, data = load_csv(path, "sweep")
        log2r = column(cols, data, "log2_R")
        omega = column(cols, data, "omega_osc_over_omega_g")
        branch = column(cols, data, "branch_id").astype(int)
        marginal = column(cols, data, "marginal").astype(bool)
        for bid in np.unique(branch[~marginal]):
            sel = (branch == bid) & ~marginal
            ax.plot(log2r[sel], omega[sel], ".", ms=2, color=cmap(int(bid) % 10))
        if args.critical_r and i < len(args.critical_r):
            ax.axvline(np.log2(args.critical_r[i]), color="r", ls=":", lw=1)
        ax.set_title(label)
    for ax in axes[-1]:
        ax.set_xlabel(r"$\log_2 R$")
    for row in axes:
        row[0].set_ylabel(r"$\omega_{\rm osc} \,/\, \omega_g$")
    fig.tight_layout()
    save(fig, args.out, args.dpi)


def main():
    sys.exit(run_script(render))


if __name__ == "__main__":
    main()
