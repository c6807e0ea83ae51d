"""Time evolution of the one-excitation amplitudes.

The equations of motion are written in the autonomous gauge: bath phases
are absorbed into the amplitudes and the whole frame rotates at the
carrier frequency, so dc/dt = i M c with a real symmetric, time-independent
generator M:

    M[e,c] = M[c,e] = omega_g
    M[c,j] = M[j,c] = g_j
    M[j,j] = -(delta_j + omega_g)

All other entries vanish.  In this frame the dark state is an exact
eigenvector of M with eigenvalue -omega_g, and a mode with eigenvalue mu
beats against the dark state at omega_osc = mu + omega_g in the
probabilities.  M is Hermitian, so the norm and <c, M c> are conserved.

The integrator is classical fixed-step 4th order.  For this linear
autonomous system the four-stage scheme is identical to the degree-4
Taylor propagator, which is how the inner loop is written.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import (
    AnalysisError,
    IntegrationDiagnosticError,
    PerturbationDomainError,
    StepSizeError,
    StructuralError,
)
from .model import ModeGrid, PhysicalParams

if TYPE_CHECKING:
    from .stationary import DarkState


@dataclass(frozen=True)
class WaveFunction:
    """One-excitation amplitudes (emitter, cavity photon, bath modes)."""

    c_e: complex
    c_c: complex
    c_bath: np.ndarray

    def to_vector(self) -> np.ndarray:
        vec = np.empty(2 + self.c_bath.size, dtype=complex)
        vec[0] = self.c_e
        vec[1] = self.c_c
        vec[2:] = self.c_bath
        return vec

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "WaveFunction":
        return cls(c_e=complex(vec[0]), c_c=complex(vec[1]), c_bath=vec[2:].copy())

    def norm(self) -> float:
        return float(np.sqrt(abs(self.c_e) ** 2 + abs(self.c_c) ** 2
                             + np.sum(np.abs(self.c_bath) ** 2)))


@dataclass(frozen=True)
class Trajectory:
    """Probability time series from `integrate`, plus optional snapshots."""

    times: np.ndarray
    p_e: np.ndarray
    p_c: np.ndarray
    p_bath_total: np.ndarray
    params: PhysicalParams
    dt: float
    norm_drift: float
    snapshots: tuple[WaveFunction, ...] | None = None
    snapshot_stride: int = 0

    @property
    def t_end(self) -> float:
        return float(self.times[-1])


def bath_diagonal(params: PhysicalParams, grid: ModeGrid) -> np.ndarray:
    """Generator diagonal for the bath modes, -(delta_j + omega_g)."""
    return -(grid.detunings + params.omega_g)


def apply_generator(vec: np.ndarray, params: PhysicalParams, grid: ModeGrid) -> np.ndarray:
    """Return M @ vec for the structured generator (O(N), no dense matrix)."""
    if vec.shape != (grid.num_modes + 2,):
        raise StructuralError(
            f"state has shape {vec.shape}, expected ({grid.num_modes + 2},)"
        )
    g = grid.couplings
    out = np.empty_like(vec)
    out[0] = params.omega_g * vec[1]
    out[1] = params.omega_g * vec[0] + g @ vec[2:]
    out[2:] = g * vec[1] + bath_diagonal(params, grid) * vec[2:]
    return out


def derivative(state: WaveFunction, params: PhysicalParams, grid: ModeGrid) -> WaveFunction:
    """Right-hand side dc/dt = i M c as a WaveFunction-shaped tangent."""
    return WaveFunction.from_vector(1j * apply_generator(state.to_vector(), params, grid))


def max_step(params: PhysicalParams, grid: ModeGrid) -> float:
    """Largest allowed integrator step, 0.05 / max(W, omega_g, kappa)."""
    return 0.05 / max(grid.half_bandwidth, params.omega_g, params.kappa)


def integrate(state0: WaveFunction, params: PhysicalParams, grid: ModeGrid,
              t_end: float, dt: float | None = None,
              snapshot_stride: int = 0) -> Trajectory:
    """Propagate ``state0`` to ``t_end`` with fixed-step 4th-order stepping.

    Probabilities are sampled every step.  Full states are retained every
    ``snapshot_stride`` steps when the stride is positive (memory stays
    bounded at large mode counts otherwise).

    Raises:
        StepSizeError: dt exceeds 0.05 / max(W, omega_g, kappa).
        IntegrationDiagnosticError: norm drift beyond 1e-6 over the run or
            beyond 1e-9 per unit time.
    """
    if t_end < 0:
        raise StructuralError(f"t_end must be >= 0, got {t_end}")
    dt_cap = max_step(params, grid)
    if dt is None:
        dt = dt_cap
    if dt > dt_cap * (1 + 1e-12):
        raise StepSizeError(
            f"dt = {dt:.6g} exceeds the accuracy bound 0.05/max(W, omega_g, kappa) "
            f"= {dt_cap:.6g}"
        )
    c = state0.to_vector()
    norm0 = np.linalg.norm(c)

    # cover the full requested span even when dt does not divide t_end
    nsteps = int(np.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
    times = np.arange(nsteps + 1) * dt
    p_e = np.empty(nsteps + 1)
    p_c = np.empty(nsteps + 1)
    p_b = np.empty(nsteps + 1)

    g = grid.couplings
    diag = bath_diagonal(params, grid)
    wg = params.omega_g

    def matvec(v):
        out = np.empty_like(v)
        out[0] = wg * v[1]
        out[1] = wg * v[0] + g @ v[2:]
        out[2:] = g * v[1] + diag * v[2:]
        return out

    def record(i, v):
        p_e[i] = abs(v[0]) ** 2
        p_c[i] = abs(v[1]) ** 2
        p_b[i] = float(np.sum(np.abs(v[2:]) ** 2))

    snapshots: list[WaveFunction] | None = [] if snapshot_stride > 0 else None
    record(0, c)
    if snapshots is not None:
        snapshots.append(WaveFunction.from_vector(c))

    # RK4 on dc/dt = (iM) c == degree-4 Taylor step in h*(iM).
    h1 = 1j * dt
    h2 = h1 * h1 / 2.0
    h3 = h2 * h1 / 3.0
    h4 = h3 * h1 / 4.0
    for i in range(1, nsteps + 1):
        v1 = matvec(c)
        v2 = matvec(v1)
        v3 = matvec(v2)
        v4 = matvec(v3)
        c += h1 * v1 + h2 * v2 + h3 * v3 + h4 * v4
        record(i, c)
        if snapshots is not None and i % snapshot_stride == 0:
            snapshots.append(WaveFunction.from_vector(c))

    drift = abs(np.linalg.norm(c) - norm0)
    if drift > 1e-6 or (t_end > 0 and drift > 1e-9 * t_end):
        raise IntegrationDiagnosticError(
            f"norm drift {drift:.3e} over t_end = {t_end:.6g} exceeds budget "
            f"(1e-6 per run, 1e-9 per unit time); reduce dt"
        )
    return Trajectory(
        times=times, p_e=p_e, p_c=p_c, p_bath_total=p_b,
        params=params, dt=float(dt), norm_drift=float(drift),
        snapshots=tuple(snapshots) if snapshots is not None else None,
        snapshot_stride=snapshot_stride,
    )


def perturb_stationary(dark: "DarkState", delta_cc: complex,
                       delta_ce_phase: float | None = None) -> WaveFunction:
    """Displace the stationary state's cavity amplitude by ``delta_cc``.

    The emitter amplitude is displaced along ``exp(i*delta_ce_phase)``
    (default: colinear with the stationary c_e) by the smaller-magnitude
    real root of the two-level norm constraint

        |c_e + dc_e|^2 + |c_c + dc_c|^2 = |c_e|^2 + |c_c|^2,

    so bath amplitudes and the total norm are untouched.

    Raises:
        PerturbationDomainError: |delta_cc| >= alpha, or the displaced
            cavity probability exceeds the two-level budget.
    """
    psi = dark.psi
    alpha = abs(psi.c_e)
    if abs(delta_cc) >= alpha:
        raise PerturbationDomainError(
            f"|delta_cc| = {abs(delta_cc):.3e} must be < alpha = {alpha:.3e}"
        )
    budget = abs(psi.c_e) ** 2 + abs(psi.c_c) ** 2
    target = budget - abs(psi.c_c + delta_cc) ** 2
    if target < 0:
        raise PerturbationDomainError(
            "no norm-preserving emitter displacement exists: "
            f"|c_c + delta_cc|^2 = {abs(psi.c_c + delta_cc) ** 2:.6g} exceeds "
            f"the two-level budget {budget:.6g}"
        )
    if delta_ce_phase is None:
        direction = psi.c_e / abs(psi.c_e)
    else:
        direction = np.exp(1j * delta_ce_phase)
    # |c_e + x*u|^2 = target with real x: x^2 + 2 Re(conj(c_e) u) x + (|c_e|^2 - target) = 0
    b = 2.0 * float(np.real(np.conj(psi.c_e) * direction))
    disc = b * b - 4.0 * (abs(psi.c_e) ** 2 - target)
    if disc < 0:
        raise PerturbationDomainError("norm constraint has no real solution for this phase")
    r1 = 0.5 * (-b + np.sqrt(disc))
    r2 = 0.5 * (-b - np.sqrt(disc))
    x = r1 if abs(r1) <= abs(r2) else r2
    out = WaveFunction(
        c_e=psi.c_e + x * direction,
        c_c=psi.c_c + delta_cc,
        c_bath=psi.c_bath.copy(),
    )
    if abs(out.norm() - 1.0) > 1e-12:
        raise PerturbationDomainError(
            f"perturbed norm {out.norm():.15f} deviates from 1 beyond 1e-12"
        )
    return out


@dataclass(frozen=True)
class BeatSpectrum:
    """Peak list from the cavity-probability beat analysis."""

    peaks: tuple[tuple[float, float], ...]  # (angular frequency, power)
    resolution: float                       # frequency bin width 2*pi/t_end

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([p[0] for p in self.peaks])


def beat_spectrum(traj: Trajectory, power_threshold: float = 1e-3) -> BeatSpectrum:
    """Locate beat frequencies in the cavity probability via a windowed DFT.

    The mean is removed, a Hann window applied, and local maxima of the
    power spectrum above ``power_threshold`` times the strongest peak are
    refined by parabolic interpolation of log power.

    Raises:
        AnalysisError: trajectory shorter than 20 Rabi periods or too few
            samples.
    """
    t_min = 20.0 * traj.params.tau_g
    if traj.t_end < t_min * (1 - 1e-12):
        raise AnalysisError(
            f"t_end = {traj.t_end:.6g} too short for beat analysis "
            f"(need >= 20 Rabi periods = {t_min:.6g})"
        )
    sig = traj.p_c - traj.p_c.mean()
    m = sig.size
    if m < 64:
        raise AnalysisError(f"too few samples ({m}) for beat analysis")
    window = np.hanning(m)
    power = np.abs(np.fft.rfft(sig * window)) ** 2
    omega = np.fft.rfftfreq(m, d=traj.dt) * 2.0 * np.pi
    resolution = 2.0 * np.pi / traj.t_end

    # a numerically constant signal only carries integrator rounding noise
    if np.abs(sig).max() < 1e-12 * max(1.0, float(np.abs(traj.p_c).max())):
        return BeatSpectrum(peaks=(), resolution=resolution)
    pmax = power.max()
    floor = power_threshold * pmax
    peaks = []
    for k in range(1, power.size - 1):
        if power[k] >= floor and power[k] > power[k - 1] and power[k] >= power[k + 1]:
            # parabolic interpolation on log power
            lm, l0, lp = np.log(power[k - 1: k + 2] + 1e-300)
            denom = lm - 2.0 * l0 + lp
            shift = 0.5 * (lm - lp) / denom if denom < 0 else 0.0
            shift = float(np.clip(shift, -0.5, 0.5))
            peaks.append((float(omega[k] + shift * (omega[1] - omega[0])),
                          float(power[k])))
    # merge peaks closer than one resolution bin, keeping the strongest
    peaks.sort(key=lambda p: -p[1])
    kept: list[tuple[float, float]] = []
    for freq, pw in peaks:
        if all(abs(freq - f0) > resolution for f0, _ in kept):
            kept.append((freq, pw))
    kept.sort(key=lambda p: p[0])
    return BeatSpectrum(peaks=tuple(kept), resolution=resolution)
