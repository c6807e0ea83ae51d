"""Self-check suite behind the `check` subcommand.

Small, fast instances of the package invariants: each entry returns
(name, passed, detail).  The product-law row holds the measured
n * critical ratio against 1/(2 pi); see the README note on the
characteristic-equation emergence law for why its deviation is reported
rather than hidden.
"""

from __future__ import annotations

import numpy as np

from .model import build_grid, build_params
from .stationary import dark_state
from .dynamics import WaveFunction, apply_generator, integrate
from .stability import build_jacobian, eigenmodes
from .spectrum import CharEqn, find_roots, product_law

TWO_PI = 2.0 * np.pi


def run_all() -> list[tuple[str, bool, str]]:
    results = []
    params = build_params(1.0, 1, 0.5, np.pi)
    grid = build_grid(params, 12.0, 200)

    asym = np.abs(grid.detunings + grid.detunings[::-1]).max()
    results.append(("grid-antisymmetry", asym == 0.0, f"max |d_j + d_mirror| = {asym:.1e}"))

    parity = np.abs(grid.couplings + grid.couplings[::-1]).max()
    results.append(("coupling-parity", parity < 1e-12 * params.G0,
                    f"odd-parity defect {parity:.1e} (delta_phi = pi)"))

    state = dark_state(params, grid)
    results.append(("dark-residual", state.residual < 1e-10,
                    f"stationarity residual {state.residual:.1e}"))

    rng = np.random.default_rng(7)
    drift_max = energy_max = 0.0
    t_end = 10.0 * params.tau
    nsteps = int(round(t_end / 8e-4))
    for _ in range(2):
        vec = rng.normal(size=grid.num_modes + 2) + 1j * rng.normal(size=grid.num_modes + 2)
        vec /= np.linalg.norm(vec)
        psi = WaveFunction.from_vector(vec)
        traj = integrate(psi, params, grid, t_end, dt=8e-4, snapshot_stride=nsteps)
        drift_max = max(drift_max, traj.norm_drift)
        e0 = float(np.real(np.vdot(vec, apply_generator(vec, params, grid))))
        vend = traj.snapshots[-1].to_vector()
        e1 = float(np.real(np.vdot(vend, apply_generator(vend, params, grid))))
        energy_max = max(energy_max, abs(e1 - e0))
    results.append(("norm-conservation", drift_max < 1e-8, f"max drift {drift_max:.1e}"))
    results.append(("energy-conservation", energy_max < 1e-8, f"max drift {energy_max:.1e}"))

    jac = build_jacobian(params, grid)
    skew = jac.skew_defect()
    results.append(("skew-hermiticity", skew == 0.0, f"relative defect {skew:.1e}"))

    spec = eigenmodes(jac)
    results.append(("weight-completeness", spec.completeness_defect < 1e-10,
                    f"|sum w - 1| = {spec.completeness_defect:.1e}"))

    sin_roots = find_roots(CharEqn(build_params(1.0, 1, 0.7, np.pi / 2), "sin")).roots
    cos_roots = find_roots(CharEqn(build_params(1.0, 1, 0.7, np.pi), "cos")).roots
    if sin_roots.size == cos_roots.size and sin_roots.size:
        dimer = np.abs(sin_roots - cos_roots).max()
    else:
        dimer = np.inf
    results.append(("dimer-equivalence", dimer < 1e-9,
                    f"cos(dphi) vs sin(dphi - pi/2) root gap {dimer:.1e}"))

    rows = product_law(2)
    worst = max(row.deviation for row in rows)
    detail = ", ".join(f"n={row.n}: nR={row.product:.4f}" for row in rows)
    results.append(("product-law-1/(2pi)", worst < 0.02,
                    f"{detail} vs 1/(2pi) = {1.0 / TWO_PI:.4f}"))
    return results
