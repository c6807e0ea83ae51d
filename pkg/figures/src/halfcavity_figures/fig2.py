"""Stationary-state mirror-field profile from `halfcavity stationary`."""

import argparse
import sys

import matplotlib.pyplot as plt

from .common import column, load_csv, run_script, save


def render(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", required=True, help="stationary CSV")
    ap.add_argument("--out", required=True)
    ap.add_argument("--dpi", type=float, default=150)
    args = ap.parse_args(argv)

    cols, data = load_csv(args.input, "stationary")
    delta = column(cols, data, "delta")
    re_c = column(cols, data, "re_c")
    im_c = column(cols, data, "im_c")

    fig, (top, bottom) = plt.subplots(2, 1, figsize=(5.0, 4.2), sharex=True)
    top.plot(delta, re_c, "C0-", label=r"$\mathrm{Re}\,c_k$")
    top.plot(delta, im_c, "C1--", label=r"$\mathrm{Im}\,c_k$")
    top.set_ylabel("amplitude")
    top.legend(frameon=False)
    bottom.plot(delta, re_c ** 2 + im_c ** 2, "C2-")
    bottom.set_ylabel(r"$|c_k|^2$")
    bottom.set_xlabel(r"detuning $\delta \,/\, \omega_g$")
    fig.tight_layout()
    save(fig, args.out, args.dpi)


def main():
    sys.exit(run_script(render))


if __name__ == "__main__":
    main()
