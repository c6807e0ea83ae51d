"""Command-line interface: every operation as a subcommand with
deterministic CSV data files and JSON run manifests.

Config resolution: built-in defaults, overridden by a key=value config
file (--config), overridden by explicit flags.  Identical resolved
configs produce byte-identical CSV files; wall time lives only in the
manifest.
"""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import __version__
from .errors import HalfCavityError
from .model import build_grid, build_params, default_grid
from .stationary import dark_state
from .dynamics import WaveFunction, beat_spectrum, integrate, max_step, perturb_stationary
from .stability import build_jacobian, eigenmodes, visible_frequencies
from .spectrum import CharEqn, critical_ratio, default_window, find_roots
from . import checks

SCHEMA_PREFIX = "halfcavity"
SCHEMA_VERSION = 1

FIGURE_PRESETS = {
    # oscillation-frequency branch sweeps: (n, delta_phi, kernel)
    "fig5a": (1, 0.0, "sin"),
    "fig5b": (1, np.pi, "sin"),
    "fig5c": (1, np.pi / 2, "sin"),
    "fig5d": (1, 3 * np.pi / 2, "sin"),
    "fig6n1": (1, 0.0, "sin"),
    "fig6n2": (2, 0.0, "sin"),
    "fig6n3": (3, 0.0, "sin"),
    "fig6n4": (4, 0.0, "sin"),
}


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, kind: str, header: list[str], rows) -> None:
    lines = [f"# schema={SCHEMA_PREFIX}/{kind}/{SCHEMA_VERSION}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_manifest(path: Path, kind: str, resolved: dict, diagnostics: dict,
                   wall_time: float) -> None:
    doc = {
        "schema": f"{SCHEMA_PREFIX}/{kind}-manifest/{SCHEMA_VERSION}",
        "tool_version": __version__,
        "resolved_config": resolved,
        "diagnostics": diagnostics,
        "wall_time_s": wall_time,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    conf = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        conf[key.strip()] = value.strip()
    return conf


class Resolver:
    """defaults < config file < flags, with an echo of what was used."""

    def __init__(self, config: dict):
        self.config = config
        self.resolved: dict = {}

    def get(self, key: str, flag, default, cast=float):
        if flag is not None:
            value = flag
        elif key in self.config:
            value = cast(self.config[key])
        else:
            value = default
        if value is not None and cast is float:
            value = float(value)
        self.resolved[key] = value
        return value


def _outdir(ctx_value: str | None) -> Path:
    out = ctx_value or os.environ.get("HALFCAVITY_OUTDIR") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _grid_for(params, resolver: Resolver, w_flag, p_flag):
    w = resolver.get("half_bandwidth", w_flag, None)
    p = resolver.get("num_pairs", p_flag, None, cast=int)
    if p is not None:
        p = int(p)
    grid = default_grid(params, half_bandwidth=w, num_pairs=p)
    resolver.resolved["half_bandwidth"] = grid.half_bandwidth
    resolver.resolved["num_pairs"] = grid.num_pairs
    return grid


def common_params(resolver: Resolver, omega_g, n, ratio, delta_phi):
    omega_g = resolver.get("omega_g", omega_g, 1.0)
    n = int(resolver.get("n", n, 1, cast=int))
    ratio = resolver.get("R", ratio, 0.5)
    delta_phi = resolver.get("delta_phi", delta_phi, 0.0)
    params = build_params(omega_g, n, ratio, delta_phi)
    resolver.resolved["delta_phi"] = params.delta_phi
    return params


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="key=value config file; flags override it.")
@click.option("--outdir", default=None, help="output directory "
              "(default: $HALFCAVITY_OUTDIR or the working directory).")
@click.version_option(version=__version__)
@click.pass_context
def main(ctx, config_path, outdir):
    """Single-photon emitter + microcavity + delayed mirror feedback toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config(config_path)
    ctx.obj["outdir"] = outdir


def _run(ctx, kind, builder):
    """Shared manifest/timing/error plumbing for all subcommands."""
    resolver = Resolver(ctx.obj["config"])
    out = _outdir(ctx.obj["outdir"])
    t0 = time.perf_counter()
    try:
        name, diagnostics = builder(resolver, out)
    except HalfCavityError as exc:
        sys.stderr.write(json.dumps(
            {"error": exc.category, "message": str(exc)}) + "\n")
        raise SystemExit(1)
    wall = time.perf_counter() - t0
    write_manifest(out / f"{name}_manifest.json", kind, resolver.resolved,
                   diagnostics, wall)
    click.echo(f"wrote {out / (name + '.csv')}")


park_options = [
    click.option("--omega-g", type=float, default=None, help="coupling rate (default 1)"),
    click.option("-n", "--n", "n_", type=int, default=None, help="delay in Rabi periods"),
    click.option("-R", "--ratio", type=float, default=None, help="damping/coupling ratio"),
    click.option("--delta-phi", type=float, default=None, help="feedback phase [rad]"),
    click.option("-W", "--half-bandwidth", type=float, default=None),
    click.option("-P", "--num-pairs", type=int, default=None),
]


def with_options(opts):
    def deco(f):
        for opt in reversed(opts):
            f = opt(f)
        return f
    return deco


@main.command()
@with_options(park_options)
@click.pass_context
def stationary(ctx, omega_g, n_, ratio, delta_phi, half_bandwidth, num_pairs):
    """Dark-state profile: CSV of (delta_j, Re c_j, Im c_j)."""
    def builder(resolver, out):
        params = common_params(resolver, omega_g, n_, ratio, delta_phi)
        grid = _grid_for(params, resolver, half_bandwidth, num_pairs)
        state = dark_state(params, grid)
        rows = zip(grid.detunings, state.psi.c_bath.real, state.psi.c_bath.imag)
        write_csv(out / "stationary.csv", "stationary",
                  ["delta", "re_c", "im_c"], rows)
        return "stationary", {
            "alpha_grid": state.alpha_grid,
            "alpha_closed": state.alpha_closed,
            "residual": state.residual,
            "approximate": state.approximate,
        }
    _run(ctx, "stationary", builder)


@main.command()
@with_options(park_options)
@click.option("--t-end", type=float, default=None, help="integration time (default 10 tau)")
@click.option("--dt", type=float, default=None, help="step (default: accuracy bound)")
@click.option("--initial", type=click.Choice(["dark", "excited-emitter", "perturbed-dark"]),
              default=None)
@click.option("--perturbation", type=float, default=None,
              help="cavity displacement as a fraction of alpha (perturbed-dark)")
@click.option("--perturbation-phase", type=float, default=None,
              help="emitter-displacement phase [rad] (default: along c_e)")
@click.option("--snapshot-stride", type=int, default=None)
@click.pass_context
def evolve(ctx, omega_g, n_, ratio, delta_phi, half_bandwidth, num_pairs,
           t_end, dt, initial, perturbation, perturbation_phase, snapshot_stride):
    """Integrate the amplitude equations: CSV of (t, p_e, p_c, p_bath)."""
    def builder(resolver, out):
        params = common_params(resolver, omega_g, n_, ratio, delta_phi)
        grid = _grid_for(params, resolver, half_bandwidth, num_pairs)
        t_end_v = resolver.get("t_end", t_end, 10.0 * params.tau)
        dt_v = resolver.get("dt", dt, max_step(params, grid))
        kind0 = resolver.get("initial", initial, "dark", cast=str)
        eps = resolver.get("perturbation", perturbation, 0.01)
        phase = resolver.get("perturbation_phase", perturbation_phase, None)
        stride = int(resolver.get("snapshot_stride", snapshot_stride, 0, cast=int))
        if kind0 == "dark":
            state0 = dark_state(params, grid).psi
        elif kind0 == "excited-emitter":
            state0 = WaveFunction(1.0 + 0j, 0j, np.zeros(grid.num_modes, dtype=complex))
        else:
            dark = dark_state(params, grid)
            state0 = perturb_stationary(dark, eps * dark.alpha_grid,
                                        delta_ce_phase=phase)
        traj = integrate(state0, params, grid, t_end_v, dt_v, snapshot_stride=stride)
        write_csv(out / "evolve.csv", "trajectory", ["t", "p_e", "p_c", "p_bath"],
                  zip(traj.times, traj.p_e, traj.p_c, traj.p_bath_total))
        return "evolve", {"norm_drift": traj.norm_drift, "steps": traj.times.size - 1}
    _run(ctx, "evolve", builder)


@main.command()
@with_options(park_options)
@click.option("--method", type=click.Choice(["auto", "dense", "secular"]), default=None)
@click.option("--weight-threshold", type=float, default=None)
@click.pass_context
def jacobian(ctx, omega_g, n_, ratio, delta_phi, half_bandwidth, num_pairs,
             method, weight_threshold):
    """Eigenmodes of the linearization: CSV of (mu, weight, omega_osc)."""
    def builder(resolver, out):
        params = common_params(resolver, omega_g, n_, ratio, delta_phi)
        grid = _grid_for(params, resolver, half_bandwidth, num_pairs)
        method_v = resolver.get("method", method, "auto", cast=str)
        thresh = resolver.get("weight_threshold", weight_threshold, 1e-3)
        jac = build_jacobian(params, grid)
        spec = eigenmodes(jac, method=method_v)
        write_csv(out / "jacobian.csv", "modes", ["mu", "weight", "omega_osc"],
                  zip(spec.eigenfrequencies, spec.weights, spec.osc_frequencies))
        visible = visible_frequencies(spec, thresh)
        centered = visible - params.omega_g
        symmetry = (max(float(np.min(np.abs(centered + v))) for v in centered)
                    if centered.size else 0.0)
        return "jacobian", {
            "skew_defect": jac.skew_defect() if jac.generator is not None else None,
            "generator_materialized": jac.generator is not None,
            "completeness_defect": spec.completeness_defect,
            "method": spec.method,
            "visible": [float(v) for v in visible],
            "visible_symmetry_defect": symmetry,
        }
    _run(ctx, "jacobian", builder)


@main.command()
@with_options(park_options[:4])
@click.option("--kernel", type=click.Choice(["sin", "cos"]), default=None)
@click.option("--window-lo", type=float, default=None)
@click.option("--window-hi", type=float, default=None)
@click.option("--scan-points", type=int, default=None)
@click.pass_context
def roots(ctx, omega_g, n_, ratio, delta_phi, kernel, window_lo, window_hi, scan_points):
    """Real roots of the characteristic equation in a window."""
    def builder(resolver, out):
        params = common_params(resolver, omega_g, n_, ratio, delta_phi)
        kern = resolver.get("kernel", kernel, "sin", cast=str)
        win_default = default_window(params)
        lo = resolver.get("window_lo", window_lo, win_default[0])
        hi = resolver.get("window_hi", window_hi, win_default[1])
        pts = resolver.get("scan_points", scan_points, None, cast=int)
        rs = find_roots(CharEqn(params, kern), (lo, hi),
                        int(pts) if pts is not None else None)
        rows = [(w, 0) for w in rs.roots] + [(w, 1) for w in rs.marginal]
        rows.sort(key=lambda r: r[0])
        write_csv(out / "roots.csv", "roots", ["omega_osc", "marginal"], rows)
        return "roots", {
            "count": int(rs.roots.size),
            "marginal_count": int(rs.marginal.size),
            "bracket_resolution": rs.bracket_resolution,
        }
    _run(ctx, "roots", builder)


@main.command("critical-r")
@with_options(park_options[:4])
@click.option("--kernel", type=click.Choice(["sin", "cos"]), default=None)
@click.option("--tol", type=float, default=None)
@click.pass_context
def critical_r(ctx, omega_g, n_, ratio, delta_phi, kernel, tol):
    """Critical damping ratio where extra oscillation branches emerge."""
    def builder(resolver, out):
        omega_g_v = resolver.get("omega_g", omega_g, 1.0)
        n_v = int(resolver.get("n", n_, 1, cast=int))
        dphi = resolver.get("delta_phi", delta_phi, 0.0)
        kern = resolver.get("kernel", kernel, "sin", cast=str)
        tol_v = resolver.get("tol", tol, 1e-4)
        crit = critical_ratio(n_v, dphi, kern, tol=tol_v, omega_g=omega_g_v)
        write_csv(out / "critical_r.csv", "critical",
                  ["n", "delta_phi", "kernel", "critical_r"],
                  [(n_v, crit.delta_phi, kern, crit.value)])
        return "critical_r", {
            "critical_r": crit.value,
            "baseline_count": crit.baseline_count,
            "bracket": list(crit.bracket),
            "fold_omega": crit.fold_omega,
            "fold_value": crit.fold_value,
        }
    _run(ctx, "critical-r", builder)


def _sweep_row(args):
    n, dphi, kernel, r, omega_g = args
    params = build_params(omega_g, n, r, dphi)
    rs = find_roots(CharEqn(params, kernel))
    return rs.roots, rs.marginal


@main.command("sweep")
@with_options(park_options[:4])
@click.option("--kernel", type=click.Choice(["sin", "cos"]), default=None)
@click.option("--log2r-lo", type=float, default=None)
@click.option("--log2r-hi", type=float, default=None)
@click.option("--log2r-step", type=float, default=None)
@click.option("--workers", type=int, default=None, help="row fan-out pool size")
@click.option("--figure", type=click.Choice(sorted(FIGURE_PRESETS)), default=None,
              help="preset (n, delta_phi, kernel) for a standard branch diagram")
@click.pass_context
def sweep_cmd(ctx, omega_g, n_, ratio, delta_phi, kernel, log2r_lo, log2r_hi,
              log2r_step, workers, figure):
    """Branch diagram: characteristic-equation roots across a log2 R grid."""
    def builder(resolver, out):
        if figure is not None:
            n_fig, dphi_fig, kern_fig = FIGURE_PRESETS[figure]
            resolver.config.setdefault("n", str(n_fig))
            resolver.config.setdefault("delta_phi", repr(dphi_fig))
            resolver.config.setdefault("kernel", kern_fig)
        omega_g_v = resolver.get("omega_g", omega_g, 1.0)
        n_v = int(resolver.get("n", n_, 1, cast=int))
        dphi = resolver.get("delta_phi", delta_phi, 0.0)
        kern = resolver.get("kernel", kernel, "sin", cast=str)
        lo = resolver.get("log2r_lo", log2r_lo, -6.0)
        hi = resolver.get("log2r_hi", log2r_hi, 6.0)
        step = resolver.get("log2r_step", log2r_step, 1.0 / 16.0)
        nworkers = int(resolver.get("workers", workers, 1, cast=int))
        resolver.resolved["figure"] = figure
        log2r = np.arange(lo, hi + 1e-9, step)
        jobs = [(n_v, dphi, kern, float(2.0 ** l2), omega_g_v) for l2 in log2r]
        if nworkers > 1:
            with ProcessPoolExecutor(max_workers=nworkers) as pool:
                results = list(pool.map(_sweep_row, jobs))
        else:
            results = [_sweep_row(job) for job in jobs]
        # branch continuity ids, assigned serially in row order
        rows = []
        prev_roots = prev_ids = None
        next_id = 0
        fsr = 2.0 * np.pi / build_params(omega_g_v, n_v, 1.0, dphi).tau
        for l2, (roots_row, marg_row) in zip(log2r, results):
            ids = np.empty(roots_row.size, dtype=int)
            for k, root in enumerate(roots_row):
                if prev_roots is not None and prev_roots.size:
                    j = int(np.argmin(np.abs(prev_roots - root)))
                    if abs(prev_roots[j] - root) < 0.5 * fsr:
                        ids[k] = prev_ids[j]
                        continue
                ids[k] = next_id
                next_id += 1
            for root, bid in zip(roots_row, ids):
                rows.append((float(l2), root / omega_g_v, int(bid), 0))
            for root in marg_row:
                rows.append((float(l2), root / omega_g_v, -1, 1))
            prev_roots, prev_ids = roots_row, ids
        name = figure or "sweep"
        write_csv(out / f"{name}.csv", "sweep",
                  ["log2_R", "omega_osc_over_omega_g", "branch_id", "marginal"], rows)
        return name, {"rows": len(log2r), "branches": int(next_id)}
    _run(ctx, "sweep", builder)


@main.command()
@click.pass_context
def check(ctx):
    """Run the invariant self-check suite and print a pass/fail table."""
    results = checks.run_all()
    width = max(len(name) for name, _, _ in results)
    failed = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        if not ok:
            failed += 1
        click.echo(f"{name:<{width}}  {status}  {detail}")
    click.echo(f"{len(results) - failed}/{len(results)} checks passed")
    if failed:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
