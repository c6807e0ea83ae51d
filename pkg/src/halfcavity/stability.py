"""Linearized stability analysis about the stationary state.

The one-excitation equations of motion are linear, so the Jacobian of the
perturbation dynamics equals i*M with M the full Hermitian generator,
independent of the base state.  J is therefore skew-Hermitian by
construction: every eigenvalue is purely imaginary (lambda = i*mu with mu
real) and perturbations oscillate without growth or decay.

Each generator eigenvalue mu beats against the dark state (eigenvalue
-omega_g) at omega_osc = mu + omega_g in the probabilities.  The weight
w_i = |<cavity photon | mode i>|^2 measures how strongly mode i shows up
in the cavity probability; the weights over all modes sum to one.

Eigensolvers:

- ``dense``: scipy symmetric eigensolver on the materialized generator.
  Default for moderate mode counts.
- ``secular``: the generator is an arrowhead matrix (bath diagonal plus
  one coupled row/column), so eigenvalues are the roots of

      phi(mu) = mu - omega_g^2/mu - sum_j g_j^2 / (mu - p_j),

  with bath poles p_j = -(delta_j + omega_g).  phi is strictly increasing
  between consecutive poles, giving guaranteed brackets for bisection, and
  the cavity weight follows in closed form from the eigenvector structure.
  This is O(N^2) instead of O(N^3) and is the default for the large grids
  that the bandwidth invariant forces at strong damping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import EigensolverError, StructuralError
from .model import ModeGrid, PhysicalParams
from .dynamics import bath_diagonal

# Above this dimension the dense O(N^3) solve is no longer the fast path.
DENSE_DIMENSION_CAP = 6500


@dataclass(frozen=True)
class JacobianOperator:
    """Jacobian J = i*M of the linearized amplitude dynamics."""

    params: PhysicalParams
    grid: ModeGrid
    dimension: int
    generator: np.ndarray | None = field(repr=False, default=None)

    @property
    def matrix(self) -> np.ndarray:
        """Dense J = i*M (materializes the generator if needed)."""
        return 1j * self.generator_matrix()

    def generator_matrix(self) -> np.ndarray:
        if self.generator is not None:
            return self.generator
        return generator_matrix(self.params, self.grid)

    def skew_defect(self) -> float:
        """max |(J + J^dagger)_ij| / max |J_ij|; zero for symmetric M."""
        m = self.generator_matrix()
        scale = np.abs(m).max()
        return float(np.abs(m - m.T).max() / scale) if scale > 0 else 0.0


def generator_matrix(params: PhysicalParams, grid: ModeGrid) -> np.ndarray:
    """Materialize the real symmetric generator M."""
    n = grid.num_modes
    m = np.zeros((n + 2, n + 2))
    m[0, 1] = m[1, 0] = params.omega_g
    m[1, 2:] = grid.couplings
    m[2:, 1] = grid.couplings
    idx = np.arange(2, n + 2)
    m[idx, idx] = bath_diagonal(params, grid)
    return m


def build_jacobian(params: PhysicalParams, grid: ModeGrid,
                   materialize: bool | None = None) -> JacobianOperator:
    """Assemble the Jacobian operator and verify its skew-Hermitian structure.

    ``materialize`` controls whether the dense generator is stored; by
    default it is stored only below `DENSE_DIMENSION_CAP` (2.2 GB at 16k
    modes otherwise).  The structured form is exact either way.
    """
    dim = grid.num_modes + 2
    if materialize is None:
        materialize = dim <= DENSE_DIMENSION_CAP
    gen = generator_matrix(params, grid) if materialize else None
    jac = JacobianOperator(params=params, grid=grid, dimension=dim, generator=gen)
    if gen is not None:
        scale = np.abs(gen).max()
        if np.abs(gen - gen.T).max() > 1e-14 * scale:
            raise StructuralError("generator lost its symmetry during assembly")
    return jac


@dataclass(frozen=True)
class ModeSpectrum:
    """Jacobian eigenfrequencies with cavity-photon weights."""

    eigenfrequencies: np.ndarray   # mu_i, ascending
    weights: np.ndarray            # |cavity component|^2 per mode
    osc_frequencies: np.ndarray    # mu_i + omega_g
    method: str
    completeness_defect: float     # |sum(weights) - 1|

    @property
    def jacobian_eigenvalues(self) -> np.ndarray:
        """lambda_i = i * mu_i (purely imaginary)."""
        return 1j * self.eigenfrequencies


def eigenmodes(jac: JacobianOperator, method: str = "auto") -> ModeSpectrum:
    """Eigen-decompose the Jacobian and extract cavity weights.

    Raises:
        EigensolverError: solver failure or weight completeness violated.
    """
    if method == "auto":
        method = "dense" if jac.dimension <= DENSE_DIMENSION_CAP else "secular"
    if method == "dense":
        mu, weights = _dense_modes(jac)
    elif method == "secular":
        mu, weights = _secular_modes(jac)
    else:
        raise StructuralError(f"unknown eigenmode method {method!r}")
    defect = abs(float(weights.sum()) - 1.0)
    if defect > 1e-10:
        raise EigensolverError(
            f"cavity-weight completeness defect {defect:.3e} exceeds 1e-10 "
            f"(method={method})"
        )
    return ModeSpectrum(
        eigenfrequencies=mu,
        weights=weights,
        osc_frequencies=mu + jac.params.omega_g,
        method=method,
        completeness_defect=defect,
    )


def _dense_modes(jac: JacobianOperator) -> tuple[np.ndarray, np.ndarray]:
    try:
        mu, vecs = scipy.linalg.eigh(jac.generator_matrix())
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise EigensolverError(f"dense eigensolver failed: {exc}") from exc
    return mu, np.abs(vecs[1, :]) ** 2


def _secular_modes(jac: JacobianOperator) -> tuple[np.ndarray, np.ndarray]:
    params, grid = jac.params, jac.grid
    poles = np.concatenate([[0.0], bath_diagonal(params, grid)])
    strengths = np.concatenate([[params.omega_g ** 2], grid.couplings ** 2])
    order = np.argsort(poles)
    poles = poles[order]
    strengths = strengths[order]
    gaps = np.diff(poles)
    if gaps.min() <= 0:
        raise EigensolverError(
            "degenerate secular poles (a bath mode sits exactly at the "
            "emitter line); use the dense method"
        )

    chunk = 4096
    buf = np.empty((chunk, poles.size))

    def phi(x: np.ndarray) -> np.ndarray:
        # sum_k strengths_k / (x - poles_k), chunked to bound memory
        out = x.copy()
        for start in range(0, x.size, chunk):
            sl = slice(start, start + chunk)
            blk = buf[: x[sl].size]
            np.subtract(x[sl, None], poles[None, :], out=blk)
            np.divide(strengths[None, :], blk, out=blk)
            out[sl] -= blk.sum(axis=1)
        return out

    span = params.omega_g + np.sqrt(strengths.sum()) + 1.0
    eps = np.finfo(float).eps
    shrink = np.maximum(np.abs(poles), 1.0) * eps
    a = np.concatenate([[poles[0] - span], poles + shrink])
    b = np.concatenate([poles - shrink, [poles[-1] + span]])

    # a lane is "collapsed" when its root hugs a pole closer than the shrink
    # margin (coupling nodes can leave strengths at the 1e-26 scale, putting
    # the root within ~strength/phi' of the pole); those lanes have no sign
    # change inside the bracket and are resolved analytically below
    fa = phi(a)
    fb = phi(b)
    left_hug = fa > 0.0    # root between the left pole and a
    right_hug = fb < 0.0   # root between b and the right pole
    sane = ~(left_hug | right_hug)

    for _ in range(55):
        mid = 0.5 * (a + b)
        pos = phi(mid) > 0.0
        b = np.where(sane & pos, mid, b)
        a = np.where(sane & ~pos, mid, a)
        width = np.max((b - a)[sane] / np.maximum(1.0, np.abs(mid[sane]))) \
            if sane.any() else 0.0
        if width < 1e-15:
            break
    mu = 0.5 * (a + b)

    weights = np.empty_like(mu)
    for start in range(0, mu.size, chunk):
        sl = slice(start, start + chunk)
        diff = mu[sl, None] - poles[None, :]
        weights[sl] = 1.0 / (1.0 + (strengths / diff ** 2).sum(axis=1))

    def phi_rest(k: int) -> float:
        # secular function at pole k with its own term removed
        mask = np.arange(poles.size) != k
        return float(poles[k] - (strengths[mask] / (poles[k] - poles[mask])).sum())

    for lane in np.nonzero(~sane)[0]:
        k = lane - 1 if left_hug[lane] else lane  # pole index being hugged
        rest = phi_rest(k)
        if rest == 0.0:
            raise EigensolverError("degenerate collapsed lane in secular solve")
        dist = strengths[k] / rest if left_hug[lane] else -strengths[k] / rest
        if dist <= 0:
            raise EigensolverError("inconsistent collapsed lane in secular solve")
        mu_lane = poles[k] + dist if left_hug[lane] else poles[k] - dist
        mask = np.arange(poles.size) != k
        denom = 1.0 + rest * rest / strengths[k] + (
            strengths[mask] / (mu_lane - poles[mask]) ** 2).sum()
        mu[lane] = mu_lane
        weights[lane] = 1.0 / denom

    order = np.argsort(mu)
    return mu[order], weights[order]


def visible_frequencies(spec: ModeSpectrum, weight_threshold: float,
                        dedupe_tol: float | None = None) -> np.ndarray:
    """Beat frequencies of the modes that manifest in the cavity probability.

    The discrete Jacobian always has one eigenvalue per grid mode; what is
    observable is where the cavity weight profile peaks.  This returns the
    omega_osc of local maxima of w(mu) with w >= weight_threshold * max(w),
    deduplicated so that clusters closer than ``dedupe_tol`` (default: two
    median mode spacings, the scale of pole-straddling artifacts) keep only
    their strongest member.

    Raises:
        StructuralError: threshold outside (0, 1].
    """
    if not (0.0 < weight_threshold <= 1.0):
        raise StructuralError(f"weight_threshold must be in (0, 1], got {weight_threshold}")
    w = spec.weights
    mu = spec.eigenfrequencies
    if dedupe_tol is None:
        dedupe_tol = 2.0 * float(np.median(np.diff(mu))) if mu.size > 1 else 0.0
    floor = weight_threshold * w.max()
    idx = []
    for k in range(w.size):
        left = w[k - 1] if k > 0 else -np.inf
        right = w[k + 1] if k < w.size - 1 else -np.inf
        if w[k] >= floor and w[k] >= left and w[k] >= right:
            idx.append(k)
    # strongest-first dedupe
    idx.sort(key=lambda k: -w[k])
    kept: list[int] = []
    for k in idx:
        if all(abs(mu[k] - mu[j]) > dedupe_tol for j in kept):
            kept.append(k)
    osc = np.sort(spec.osc_frequencies[kept])
    return osc
