"""Physical parameters and the discretized external-cavity mode bath.

Nondimensional conventions used throughout the package:

- the emitter-cavity coupling rate sets the frequency unit (``omega_g = 1``
  is the usual choice), and the vacuum speed of light is 1, so the mirror
  distance is ``L = tau / 2``;
- the feedback round trip is locked to the Rabi period,
  ``tau = n * 2*pi/omega_g``, so commensurability is structural and never
  a free input;
- the cavity damping rate is ``kappa = 4 * R * omega_g`` with ``R`` the
  dimensionless damping-to-coupling ratio;
- the carrier frequency never appears as a number.  It enters only through
  the round-trip feedback phase ``delta_phi`` via
  ``omega0 * tau = delta_phi + pi (mod 2*pi)``, which fixes the coupling
  phase angle per mode (see `coupling_angle`).  The leftover integer
  ambiguity is a global sign on all couplings, fixed to ``+``.

Bath detunings ``delta`` are measured from the beat reference frequency
(carrier plus coupling rate).  The grid is a staggered, exactly
antisymmetric midpoint lattice: ``delta_j = +/- (j - 1/2) * ddelta``,
which excludes the resonance point ``delta = 0`` where the stationary
amplitude has a pole.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridResolutionError, ParameterDomainError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhysicalParams:
    """Immutable system constants; derived rates are recomputed on access.

    Attributes:
        omega_g: Emitter-cavity coupling rate (angular frequency units).
        n: Commensurability index; the feedback delay is n Rabi periods.
        R: Dimensionless ratio of cavity damping to coupling, kappa/(4 g).
        delta_phi: Round-trip feedback phase, normalized into [0, 2 pi).
    """

    omega_g: float
    n: int
    R: float
    delta_phi: float

    @property
    def kappa(self) -> float:
        """Cavity photon damping rate, 4 * R * omega_g."""
        return 4.0 * self.R * self.omega_g

    @property
    def tau_g(self) -> float:
        """Rabi period 2 pi / omega_g."""
        return TWO_PI / self.omega_g

    @property
    def tau(self) -> float:
        """External-cavity round-trip delay, n * tau_g (exact)."""
        return self.n * self.tau_g

    @property
    def G0(self) -> float:
        """Coupling prefactor sqrt(2 * kappa / pi) (unit light speed)."""
        return np.sqrt(2.0 * self.kappa / np.pi)


def build_params(omega_g: float, n: int, R: float, delta_phi: float) -> PhysicalParams:
    """Validate and assemble the nondimensionalized system constants.

    Args:
        omega_g: Coupling rate, > 0.
        n: Commensurability index, integer >= 1.
        R: Damping-to-coupling ratio, > 0.
        delta_phi: Feedback phase; any real, reduced mod 2 pi.

    Raises:
        ParameterDomainError: for non-positive omega_g, n or R.
    """
    if not (omega_g > 0):
        raise ParameterDomainError(f"omega_g must be > 0, got {omega_g}")
    if int(n) != n or n < 1:
        raise ParameterDomainError(f"n must be a positive integer, got {n}")
    if not (R > 0):
        raise ParameterDomainError(f"R must be > 0, got {R}")
    delta_phi = float(np.mod(delta_phi, TWO_PI))
    return PhysicalParams(float(omega_g), int(n), float(R), delta_phi)


@dataclass(frozen=True)
class ModeGrid:
    """Staggered symmetric detuning grid with per-mode coupling amplitudes.

    ``detunings`` holds 2P strictly increasing values, exactly antisymmetric
    by construction.  ``couplings`` carries the quadrature weight
    sqrt(ddelta), so discrete sums over modes approximate the continuum
    integral directly.
    """

    half_bandwidth: float
    num_pairs: int
    detunings: np.ndarray = field(repr=False)
    couplings: np.ndarray = field(repr=False)

    @property
    def ddelta(self) -> float:
        """Grid spacing W / P."""
        return self.half_bandwidth / self.num_pairs

    @property
    def num_modes(self) -> int:
        return 2 * self.num_pairs

    def mirror_index(self, j: int) -> int:
        """Index of the mode at -detunings[j]."""
        return self.num_modes - 1 - j


def coupling_angle(params: PhysicalParams, delta) -> np.ndarray:
    """Phase angle of the mirror standing wave at bath detuning ``delta``.

    The mode function sampled at the cavity position is sin(k L); with the
    carrier eliminated through the feedback phase this is sin(theta) with
    theta = (delta_phi + pi)/2 + delta * tau / 2 (global sign fixed to +).
    """
    return 0.5 * (params.delta_phi + np.pi) + 0.5 * np.asarray(delta, dtype=float) * params.tau


def build_couplings(params: PhysicalParams, grid: ModeGrid) -> np.ndarray:
    """Discrete coupling amplitudes g_j = G0 * sin(theta_j) * sqrt(ddelta).

    The sqrt(ddelta) factor makes sum(g_j * c_j) approximate the continuum
    coupling integral for grid-weighted bath amplitudes.
    """
    theta = coupling_angle(params, grid.detunings)
    return params.G0 * np.sin(theta) * np.sqrt(grid.ddelta)


def build_grid(params: PhysicalParams, half_bandwidth: float, num_pairs: int) -> ModeGrid:
    """Construct the mode bath for ``params``, enforcing grid invariants.

    Args:
        half_bandwidth: W; detunings span [-W, W].
        num_pairs: P; the grid holds 2P modes at +/-(j - 1/2) * W/P.

    Raises:
        GridResolutionError: if ddelta >= pi/(4 tau) (fewer than 4 points
            per half free spectral range) or W < max(8 omega_g, 4 kappa)
            (bath bandwidth must dominate all system rates).
    """
    if num_pairs < 1 or int(num_pairs) != num_pairs:
        raise GridResolutionError(f"num_pairs must be a positive integer, got {num_pairs}")
    if not (half_bandwidth > 0):
        raise GridResolutionError(f"half_bandwidth must be > 0, got {half_bandwidth}")
    ddelta = half_bandwidth / num_pairs
    bound = np.pi / (4.0 * params.tau)
    if not (ddelta < bound):
        raise GridResolutionError(
            f"grid spacing ddelta = W/P = {ddelta:.6g} violates ddelta < pi/(4 tau) "
            f"= {bound:.6g} (need >= 4 points per half free spectral range)"
        )
    w_min = max(8.0 * params.omega_g, 4.0 * params.kappa)
    if half_bandwidth < w_min:
        raise GridResolutionError(
            f"half_bandwidth W = {half_bandwidth:.6g} violates W >= max(8 omega_g, 4 kappa) "
            f"= {w_min:.6g}"
        )
    positive = (np.arange(1, num_pairs + 1) - 0.5) * ddelta
    detunings = np.concatenate([-positive[::-1], positive])
    grid = ModeGrid(
        half_bandwidth=float(half_bandwidth),
        num_pairs=int(num_pairs),
        detunings=detunings,
        couplings=np.empty(0),
    )
    couplings = build_couplings(params, grid)
    detunings.setflags(write=False)
    couplings.setflags(write=False)
    object.__setattr__(grid, "couplings", couplings)
    return grid


def default_grid(params: PhysicalParams, half_bandwidth: float | None = None,
                 num_pairs: int | None = None) -> ModeGrid:
    """Desk-scale grid: W = max(12 omega_g, 4.2 kappa), ddelta safely inside
    the resolution bound, at least 1500 mode pairs.

    Either value can be pinned explicitly; the other is derived.
    """
    if half_bandwidth is None:
        half_bandwidth = max(12.0 * params.omega_g, 4.2 * params.kappa)
    if num_pairs is None:
        bound = np.pi / (4.0 * params.tau)
        num_pairs = max(1500, int(np.ceil(half_bandwidth / (0.8 * bound))))
    return build_grid(params, half_bandwidth, num_pairs)
