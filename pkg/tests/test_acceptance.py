"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line with the measured numbers.

Four criteria (strong-coupling-oscillation, critical-ratios, product-law,
cross-oracle) pin target values that the characteristic equation itself
contradicts; they are implemented exactly as stated and fail with the
measured behavior in the assertion message.  The analytic reason is
summarized in each docstring and in the README's "known deviations" note.
"""

import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest

from halfcavity import (
    CharEqn,
    WaveFunction,
    apply_generator,
    beat_spectrum,
    build_grid,
    build_jacobian,
    build_params,
    critical_ratio,
    dark_state,
    default_r_grid,
    eigenmodes,
    find_roots,
    integrate,
    max_step,
    perturb_stationary,
    product_law,
    visible_frequencies,
)

TWO_PI = 2.0 * np.pi

R_VALUES = (0.05, 0.5, 8.0, 64.0)
PHASES = (0.0, np.pi, np.pi / 2)


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def matrix_grid(ratio: float):
    """Per-ratio grid honoring W >= max(8 omega_g, 4 kappa) and the
    4-points-per-half-FSR resolution bound."""
    if ratio <= 0.5:
        return 64.0, 1500          # N = 3000
    if ratio <= 8.0:
        return 128.0, 1500         # N = 3000
    return 1024.0, 8250            # N = 16500, secular eigensolver


@pytest.fixture(scope="module")
def mode_spectra():
    """Eigenmodes for the 12-point (R, delta_phi) matrix at n = 1."""
    out = {}
    for ratio in R_VALUES:
        w, pairs = matrix_grid(ratio)
        for dphi in PHASES:
            params = build_params(1.0, 1, ratio, dphi)
            grid = build_grid(params, w, pairs)
            spec = eigenmodes(build_jacobian(params, grid))
            out[(ratio, dphi)] = (params, grid, spec)
    return out


@pytest.fixture(scope="module")
def fft_peaks(mode_spectra):
    """Beat spectra of perturbed dark states on the trajectory-feasible
    subset of the matrix (the forced 16k-mode grids at R = 64 put a single
    trajectory at ~2.6 million steps, hours on this hardware; see README)."""
    out = {}
    for ratio in (0.05, 0.5, 8.0):
        for dphi in PHASES:
            params, grid, _ = mode_spectra[(ratio, dphi)]
            d = dark_state(params, grid)
            state0 = perturb_stationary(d, 0.01 * d.alpha_grid)
            traj = integrate(state0, params, grid, 20.0 * params.tau_g,
                             dt=max_step(params, grid))
            out[(ratio, dphi)] = beat_spectrum(traj)
    return out


class TestStationaryFlatness:
    @pytest.mark.parametrize("dphi", [np.pi, 0.0])
    def test_dark_state_probabilities_flat(self, dphi):
        t0 = time.perf_counter()
        params = build_params(1.0, 1, 0.5, dphi)
        grid = build_grid(params, 12.0, 1500)   # N = 3000
        d = dark_state(params, grid)
        traj = integrate(d.psi, params, grid, 10.0 * params.tau)
        dev = np.abs(traj.p_c - d.alpha_grid ** 2).max()
        elapsed = time.perf_counter() - t0
        ok = dev < 1e-6 and elapsed < 60.0
        report("stationary-flatness",
               ok, f"delta_phi={dphi:.3f}: max|p_c - alpha^2| = {dev:.2e}, "
                   f"runtime {elapsed:.1f}s")
        assert ok


class TestClosedFormAlpha:
    def test_grid_alpha_matches_continuum_and_converges(self):
        params = build_params(1.0, 1, 0.5, np.pi)
        errs = []
        for w, pairs in [(12.0, 1500), (24.0, 3000)]:
            d = dark_state(params, build_grid(params, w, pairs))
            errs.append(abs(d.alpha_grid - d.alpha_closed) / d.alpha_closed)
        ok = errs[0] < 0.01 and errs[1] < 0.65 * errs[0]
        report("closed-form-alpha",
               ok, f"relative error {errs[0]:.2e} at N=3000, "
                   f"{errs[1]:.2e} after doubling (ratio {errs[1]/errs[0]:.2f})")
        assert ok


class TestSkewHermitianSpectrum:
    def test_purely_imaginary_eigenvalues(self, mode_spectra):
        worst = 0.0
        for (ratio, dphi), (params, grid, spec) in mode_spectra.items():
            lam = spec.jacobian_eigenvalues
            rel = np.abs(lam.real).max() / np.abs(lam).max()
            worst = max(worst, rel)
            assert spec.completeness_defect < 1e-10
        ok = worst < 1e-12
        report("skew-hermitian-spectrum",
               ok, f"max |Re lambda| / max |lambda| = {worst:.2e} over 12 points")
        assert ok


class TestStrongCouplingOscillation:
    def test_perturbed_dark_state_fft_and_envelope(self):
        """Targets: dominant beat at 2*omega_g, envelope rate 2*kappa.

        At R = 0.5 > critical (~0.0789) with in-phase feedback the dominant
        persistent beat sits on the emerged branch near 2.44*omega_g, and the
        pre-feedback transient is governed by the flat part of the mirror
        kernel, which damps the cavity amplitude alone at rate kappa (the
        emitter-cavity pair is exactly critically damped at R = 0.5), so the
        measured envelope rate is ~0.4*kappa, nowhere near 2*kappa.
        """
        params = build_params(1.0, 1, 0.5, 0.0)
        grid = build_grid(params, 12.0, 1500)
        d = dark_state(params, grid)
        state0 = perturb_stationary(d, 0.01 * d.alpha_grid)
        traj = integrate(state0, params, grid, 40.0 * params.tau_g)
        spec = beat_spectrum(traj)
        dominant = max(spec.peaks, key=lambda p: p[1])[0]
        fft_ok = abs(dominant - 2.0 * params.omega_g) < spec.resolution

        dev = np.abs(traj.p_c - d.alpha_grid ** 2)
        rate_pre = _envelope_rate(traj.times, dev, 0.0, params.tau)
        rate_post = _envelope_rate(traj.times, dev, params.tau, 3.0 * params.tau)
        target = 2.0 * params.kappa
        rate_ok = 0.8 * target <= rate_pre <= 1.2 * target
        arrest_ok = rate_post < 0.25 * rate_pre
        ok = fft_ok and rate_ok and arrest_ok
        report("strong-coupling-oscillation", ok,
               f"dominant peak {dominant:.3f} (target 2.0 +/- {spec.resolution:.3f}), "
               f"envelope rate {rate_pre:.2f} (target {target:.1f} +/- 20%), "
               f"post-delay rate {rate_post:.3f} (arrest {'yes' if arrest_ok else 'no'})")
        assert ok, (
            f"dominant={dominant:.4f} vs 2.0+/-{spec.resolution:.3f}; "
            f"rate={rate_pre:.3f} vs {target}+/-20%; arrest={arrest_ok}"
        )


def _envelope_rate(times, dev, t_lo, t_hi):
    """Log-slope fit through the local maxima of |p_c - alpha^2|."""
    mask = (times >= t_lo) & (times <= t_hi)
    t = times[mask]
    s = dev[mask]
    peaks = [i for i in range(1, s.size - 1)
             if s[i] >= s[i - 1] and s[i] >= s[i + 1] and s[i] > 1e-14]
    coeffs = np.polyfit(t[peaks], np.log(s[peaks]), 1)
    return -float(coeffs[0])


class TestCriticalRatios:
    def test_emergence_thresholds(self):
        """Targets trace the first branch emergence to kappa*tau = 4; the
        equation's own first fold is at kappa*tau = 2 exactly (the slope of
        f at the baseline root omega = 0 is kappa*tau - 2), so every
        measured value is half the target."""
        targets = [
            (1, 0.0, 0.156, 0.005),
            (1, np.pi, 0.62, 0.01),
            (2, 0.0, 0.08, 0.005),
            (3, 0.0, 0.053, 0.005),
            (4, 0.0, 0.039, 0.005),
        ]
        t0 = time.perf_counter()
        rows = []
        ok = True
        for n, dphi, expect, tol in targets:
            crit = critical_ratio(n, dphi)
            hit = abs(crit.value - expect) <= tol
            ok = ok and hit
            rows.append(f"Rbar({n},{dphi:.2f}) = {crit.value:.4f} "
                        f"(target {expect} +/- {tol})")
        elapsed = time.perf_counter() - t0
        ok = ok and elapsed < 300.0
        report("critical-ratios", ok, "; ".join(rows) + f"; runtime {elapsed:.0f}s")
        assert ok, "; ".join(rows)


class TestProductLaw:
    def test_product_constancy(self):
        """The product n * Rbar(n, 0) is indeed n-independent, but equals
        1/(4 pi) (kappa*tau = 2), exactly half the 1/(2 pi) target."""
        rows = product_law(4)
        detail = ", ".join(f"n={r.n}: n*Rbar = {r.product:.4f}" for r in rows)
        ok = all(r.deviation < 0.02 for r in rows)
        report("product-law", ok,
               f"{detail} vs target 1/(2 pi) = {1 / TWO_PI:.4f}")
        assert ok, detail


class TestFsrAsymptote:
    def test_weak_coupling_root_spacing(self):
        params = build_params(1.0, 1, 64.0, 0.0)
        rs = find_roots(CharEqn(params), (-4.0, 6.0))
        fsr = np.pi / params.tau
        spacing = np.diff(rs.roots)
        mids = 0.5 * (rs.roots[1:] + rs.roots[:-1])
        # the gap straddling the symmetry axis omega_g is structurally
        # root-free and spans two FSRs; all other neighbors sit one FSR apart
        axis = np.abs(mids - params.omega_g) < fsr
        ok = (axis.sum() == 1
              and abs(spacing[axis][0] - 2 * fsr) < 0.05 * 2 * fsr
              and np.abs(spacing[~axis] - fsr).max() < 0.05 * fsr)
        report("fsr-asymptote", ok,
               f"{rs.roots.size} roots, spacing {spacing[~axis].mean():.4f} "
               f"vs pi/tau = {fsr:.4f}, axis gap {spacing[axis][0]:.4f}")
        assert ok


class TestCrossOracle:
    def test_jacobian_roots_fft_agree(self, mode_spectra, fft_peaks):
        """Pairwise 0.02*omega_g agreement of weight-threshold Jacobian
        modes, characteristic-equation roots, and trajectory beat peaks.

        The 1e-3 relative weight threshold is far below the Cauchy-tailed
        background of the cavity-weight profile at moderate damping, and
        branch pairs closer than their resonance width blur into single
        displaced humps, so the literal comparison fails at the in-phase
        and quarter-phase points; the sharp-branch regimes agree to well
        under tolerance.
        """
        tol = 0.02
        lines = []
        ok = True
        for (ratio, dphi), (params, grid, spec) in sorted(mode_spectra.items()):
            window = (-4.0, 6.0)
            roots = find_roots(CharEqn(params), window).roots
            vis = visible_frequencies(spec, 1e-3)
            vis = vis[(vis > window[0]) & (vis < window[1])]
            d_vr = max(float(np.min(np.abs(roots - v))) for v in vis)
            point_ok = d_vr <= tol
            detail = f"R={ratio}, dphi={dphi:.2f}: visible-vs-roots {d_vr:.3f}"
            if (ratio, dphi) in fft_peaks:
                peaks = fft_peaks[(ratio, dphi)].frequencies
                # beats are detected at |omega|; compare inside the window
                peaks = peaks[peaks <= window[1]]
                d_fr = max(float(np.min(np.abs(np.abs(roots) - f))) for f in peaks)
                d_fv = max(float(np.min(np.abs(np.abs(vis) - f))) for f in peaks)
                point_ok = point_ok and d_fr <= tol and d_fv <= tol
                detail += f", fft-vs-roots {d_fr:.3f}, fft-vs-visible {d_fv:.3f}"
            else:
                detail += ", fft skipped (16k-mode trajectory infeasible)"
            ok = ok and point_ok
            lines.append(detail + ("" if point_ok else "  <-- exceeds 0.02"))
        report("cross-oracle", ok, " | ".join(lines))
        assert ok, "\n".join(lines)


class TestDimerMapping:
    def test_cos_kernel_equals_shifted_sin_kernel(self):
        worst = 0.0
        r_grid = default_r_grid()
        for dphi in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
            shifted = np.mod(dphi - np.pi / 2, TWO_PI)
            for ratio in r_grid:
                cos_roots = find_roots(
                    CharEqn(build_params(1.0, 1, ratio, dphi), "cos")).roots
                sin_roots = find_roots(
                    CharEqn(build_params(1.0, 1, ratio, shifted), "sin")).roots
                assert cos_roots.size == sin_roots.size, (
                    f"root-count mismatch at R={ratio}, dphi={dphi}")
                if cos_roots.size:
                    worst = max(worst, float(np.abs(cos_roots - sin_roots).max()))
        ok = worst < 1e-9
        report("dimer-mapping", ok,
               f"max root gap {worst:.2e} over {4 * r_grid.size} sweep rows")
        assert ok


def _conserve_one(seed: int):
    params = build_params(1.0, 1, 0.5, np.pi)
    grid = build_grid(params, 12.0, 150)
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=grid.num_modes + 2) + 1j * rng.normal(size=grid.num_modes + 2)
    vec /= np.linalg.norm(vec)
    t_end = 10.0 * params.tau
    nsteps = int(np.ceil(t_end / 8e-4 - 1e-9))
    traj = integrate(WaveFunction.from_vector(vec), params, grid, t_end,
                     dt=8e-4, snapshot_stride=nsteps)
    vend = traj.snapshots[-1].to_vector()
    e0 = float(np.real(np.vdot(vec, apply_generator(vec, params, grid))))
    e1 = float(np.real(np.vdot(vend, apply_generator(vend, params, grid))))
    return traj.norm_drift, abs(e1 - e0)


class TestConservationSuite:
    def test_norm_and_energy_over_random_states(self):
        with ProcessPoolExecutor(max_workers=2) as pool:
            results = list(pool.map(_conserve_one, range(50)))
        norm_worst = max(r[0] for r in results)
        energy_worst = max(r[1] for r in results)
        ok = norm_worst < 1e-8 and energy_worst < 1e-8
        report("conservation-suite", ok,
               f"50 states over 10 tau: max norm drift {norm_worst:.2e}, "
               f"max energy drift {energy_worst:.2e}")
        assert ok
