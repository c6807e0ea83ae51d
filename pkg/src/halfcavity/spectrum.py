"""Characteristic-equation engine for the oscillation frequencies.

Beat frequencies omega about the stationary state solve

    (omega - omega_g)^2 - kappa (omega - omega_g) K(omega tau - delta_phi)
        - omega_g^2 = 0

with K = sin for half-cavity mirror feedback.  K = cos covers the
spin-dimer variant, which is the same equation with the feedback phase
shifted by -pi/2 (a tested identity, not an assumption).

Root finding is a dense sign-change scan with bisection plus one or two
Newton polish steps; grazing (double) roots are detected as deep local
minima of |f| and reported separately as marginal.  The critical damping
ratio where extra root pairs first emerge is located by bisecting the
root-count transition in R and cross-validated with a two-variable Newton
solve of the fold condition f = 0, df/domega = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RootSearchError, StructuralError
from .model import PhysicalParams, build_params

TWO_PI = 2.0 * np.pi

KERNELS = ("sin", "cos")


@dataclass(frozen=True)
class CharEqn:
    """Characteristic equation for one parameter set and kernel."""

    params: PhysicalParams
    kernel: str = "sin"

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise StructuralError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")


def char_fn(eqn: CharEqn, omega) -> np.ndarray:
    """Evaluate f(omega); vectorized over omega."""
    p = eqn.params
    omega = np.asarray(omega, dtype=float)
    x = omega - p.omega_g
    arg = omega * p.tau - p.delta_phi
    kern = np.sin(arg) if eqn.kernel == "sin" else np.cos(arg)
    return x * x - p.kappa * x * kern - p.omega_g ** 2


def char_fn_domega(eqn: CharEqn, omega) -> np.ndarray:
    """d f / d omega, used by the Newton polish and fold solver."""
    p = eqn.params
    omega = np.asarray(omega, dtype=float)
    x = omega - p.omega_g
    arg = omega * p.tau - p.delta_phi
    if eqn.kernel == "sin":
        kern, dkern = np.sin(arg), np.cos(arg)
    else:
        kern, dkern = np.cos(arg), -np.sin(arg)
    return 2.0 * x - p.kappa * (kern + x * p.tau * dkern)


def default_window(params: PhysicalParams) -> tuple[float, float]:
    """Search window: omega_g +/- 4 omega_g, padded by one free spectral range."""
    wg = params.omega_g
    fsr = TWO_PI / params.tau
    return (wg - 4.0 * wg - fsr, wg + 4.0 * wg + fsr)


@dataclass(frozen=True)
class RootSet:
    """Polished real roots of the characteristic equation in a window."""

    roots: np.ndarray
    marginal: np.ndarray
    bracket_resolution: float
    window: tuple[float, float]
    eqn: CharEqn


def _min_scan_points(params: PhysicalParams, lo: float, hi: float) -> int:
    # >= 16 samples per oscillation period of the feedback kernel
    return int(np.ceil(16.0 * (hi - lo) * params.tau / TWO_PI))


def find_roots(eqn: CharEqn, window: tuple[float, float] | None = None,
               scan_points: int | None = None) -> RootSet:
    """Locate all real roots of f in ``window``.

    Raises:
        RootSearchError: scan_points below the 16-per-kernel-period bound.
    """
    p = eqn.params
    if window is None:
        window = default_window(p)
    lo, hi = window
    if not hi > lo:
        raise StructuralError(f"empty window {window}")
    floor = _min_scan_points(p, lo, hi)
    if scan_points is None:
        scan_points = max(4097, 4 * floor)
    elif scan_points < floor:
        raise RootSearchError(
            f"scan_points = {scan_points} below the resolution bound "
            f"16*(hi-lo)*tau/(2*pi) = {floor}"
        )
    w = np.linspace(lo, hi, scan_points)
    f = char_fn(eqn, w)
    spacing = w[1] - w[0]
    ftol = 1e-10 * p.omega_g ** 2

    roots = [float(w[i]) for i in np.where(f == 0.0)[0]]
    sign = np.sign(f)
    for i in np.where(sign[:-1] * sign[1:] < 0)[0]:
        a, b = w[i], w[i + 1]
        fa = f[i]
        for _ in range(60):
            mid = 0.5 * (a + b)
            fm = float(char_fn(eqn, mid))
            if fa * fm <= 0:
                b = mid
            else:
                a, fa = mid, fm
        root = 0.5 * (a + b)
        for _ in range(3):  # Newton polish to the residual tolerance
            fr = float(char_fn(eqn, root))
            if abs(fr) < ftol:
                break
            slope = float(char_fn_domega(eqn, root))
            if slope == 0.0:
                break
            step = fr / slope
            if abs(step) > spacing:
                break
            root -= step
        if abs(float(char_fn(eqn, root))) < ftol and lo <= root <= hi:
            roots.append(float(root))

    roots = np.array(sorted(roots))
    if roots.size:
        keep = np.concatenate([[True], np.diff(roots) > 0.5 * spacing])
        roots = roots[keep]

    marginal = _find_marginal(eqn, w, f, roots, spacing)
    return RootSet(roots=roots, marginal=marginal,
                   bracket_resolution=float(spacing), window=(float(lo), float(hi)),
                   eqn=eqn)


def _find_marginal(eqn: CharEqn, w: np.ndarray, f: np.ndarray,
                   roots: np.ndarray, spacing: float) -> np.ndarray:
    """Grazing double roots: deep local minima of |f| away from sign changes."""
    p = eqn.params
    af = np.abs(f)
    out = []
    interior = np.where((af[1:-1] <= af[:-2]) & (af[1:-1] <= af[2:]))[0] + 1
    for i in interior:
        # refine the extremum of f by bisecting f' over the adjacent cells
        a, b = w[i - 1], w[i + 1]
        da = float(char_fn_domega(eqn, a))
        db = float(char_fn_domega(eqn, b))
        if da * db > 0:
            omega_star = w[i]
        else:
            for _ in range(60):
                mid = 0.5 * (a + b)
                dm = float(char_fn_domega(eqn, mid))
                if da * dm <= 0:
                    b = mid
                else:
                    a, da = mid, dm
            omega_star = 0.5 * (a + b)
        if abs(float(char_fn(eqn, omega_star))) < 1e-8 * p.omega_g ** 2:
            near_root = roots.size and np.min(np.abs(roots - omega_star)) < 2 * spacing
            if not near_root:
                out.append(float(omega_star))
    return np.array(sorted(out))


@dataclass(frozen=True)
class CriticalRatio:
    """Result of the critical damping-ratio search."""

    value: float
    baseline_count: int
    bracket: tuple[float, float]
    fold_omega: float | None
    fold_value: float | None     # Newton-polished R, when it converged
    window: tuple[float, float]
    kernel: str
    n: int
    delta_phi: float


def _root_count(n: int, R: float, delta_phi: float, kernel: str,
                window: tuple[float, float], scan_points: int,
                omega_g: float) -> int:
    eqn = CharEqn(build_params(omega_g, n, R, delta_phi), kernel)
    w = np.linspace(window[0], window[1], scan_points)
    f = char_fn(eqn, w)
    sign = np.sign(f)
    return int(np.count_nonzero(sign[:-1] * sign[1:] < 0)
               + np.count_nonzero(f == 0.0))


def critical_ratio(n: int, delta_phi: float, kernel: str = "sin",
                   r_lo: float = 1e-3, r_hi: float = 10.0,
                   tol: float = 1e-4, omega_g: float = 1.0) -> CriticalRatio:
    """Infimum R at which the root count first exceeds its small-R baseline.

    Bisection on the root-count transition, scanned densely enough that a
    splitting tangent pair is caught well inside ``tol``; the result is
    cross-validated by solving the fold condition (f = 0 and f' = 0) with
    a two-variable Newton iteration started inside the transition bracket.

    Raises:
        RootSearchError: no count transition inside [r_lo, r_hi].
    """
    params_probe = build_params(omega_g, n, r_lo, delta_phi)
    window = default_window(params_probe)
    width = window[1] - window[0]
    scan_points = max(8193, int(np.ceil(128.0 * width * params_probe.tau / TWO_PI)))

    def count(r: float) -> int:
        return _root_count(n, r, delta_phi, kernel, window, scan_points, omega_g)

    baseline = count(r_lo)
    if count(r_hi) <= baseline:
        raise RootSearchError(
            f"no root-count transition in R within [{r_lo}, {r_hi}] "
            f"(baseline count {baseline})"
        )
    a, b = r_lo, r_hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if count(mid) > baseline:
            b = mid
        else:
            a = mid

    fold_omega, fold_value = _polish_fold(n, delta_phi, kernel, (a, b),
                                          window, scan_points, omega_g, tol)
    value = fold_value if fold_value is not None else 0.5 * (a + b)
    return CriticalRatio(
        value=float(value), baseline_count=baseline, bracket=(float(a), float(b)),
        fold_omega=fold_omega, fold_value=fold_value, window=window,
        kernel=kernel, n=n, delta_phi=float(np.mod(delta_phi, TWO_PI)),
    )


def _polish_fold(n: int, delta_phi: float, kernel: str,
                 bracket: tuple[float, float], window: tuple[float, float],
                 scan_points: int, omega_g: float,
                 tol: float) -> tuple[float | None, float | None]:
    """Newton solve of f = 0, df/domega = 0 in (omega, kappa)."""
    r_hi = bracket[1]
    eqn_lo = CharEqn(build_params(omega_g, n, bracket[0], delta_phi), kernel)
    eqn_hi = CharEqn(build_params(omega_g, n, r_hi, delta_phi), kernel)
    lo_roots = find_roots(eqn_lo, window, scan_points).roots
    hi_roots = find_roots(eqn_hi, window, scan_points).roots
    # first root of the just-emerged set seeds the fold position
    fresh = [r for r in hi_roots
             if lo_roots.size == 0 or np.min(np.abs(lo_roots - r)) > 1e-3 * omega_g]
    if not fresh:
        return None, None
    omega = float(fresh[0])
    kappa = 4.0 * r_hi * omega_g
    wg, tau = omega_g, build_params(omega_g, n, r_hi, delta_phi).tau
    dphi = float(np.mod(delta_phi, TWO_PI))
    for _ in range(80):
        x = omega - wg
        arg = omega * tau - dphi
        if kernel == "sin":
            kern, dkern, d2kern = np.sin(arg), np.cos(arg), -np.sin(arg)
        else:
            kern, dkern, d2kern = np.cos(arg), -np.sin(arg), -np.cos(arg)
        f = x * x - kappa * x * kern - wg ** 2
        fw = 2.0 * x - kappa * (kern + x * tau * dkern)
        fww = 2.0 - kappa * (2.0 * tau * dkern + x * tau * tau * d2kern)
        fk = -x * kern
        fwk = -(kern + x * tau * dkern)
        det = fw * fwk - fk * fww
        if det == 0.0:
            return None, None
        d_omega = (f * fwk - fk * fw) / det
        d_kappa = (fw * fw - f * fww) / det
        omega -= d_omega
        kappa -= d_kappa
        if abs(d_omega) < 1e-13 and abs(d_kappa) < 1e-13:
            break
    r_fold = kappa / (4.0 * omega_g)
    if bracket[0] - 10 * tol <= r_fold <= bracket[1] + 10 * tol:
        return float(omega), float(r_fold)
    return None, None


@dataclass(frozen=True)
class ProductLawRow:
    n: int
    critical: float
    product: float          # n * critical
    deviation: float        # |product - 1/(2 pi)| / (1/(2 pi))


def product_law(n_max: int, delta_phi: float = 0.0,
                kernel: str = "sin") -> list[ProductLawRow]:
    """Critical ratios for n = 1..n_max and the products n * critical.

    The deviation column compares against 1/(2 pi); callers decide what
    tolerance to hold it to.
    """
    if n_max < 1:
        raise StructuralError(f"n_max must be >= 1, got {n_max}")
    target = 1.0 / TWO_PI
    rows = []
    for n in range(1, n_max + 1):
        crit = critical_ratio(n, delta_phi, kernel)
        product = n * crit.value
        rows.append(ProductLawRow(
            n=n, critical=crit.value, product=product,
            deviation=abs(product - target) / target,
        ))
    return rows


@dataclass(frozen=True)
class SweepRow:
    log2_R: float
    R: float
    roots: np.ndarray
    branch_ids: np.ndarray
    marginal: np.ndarray


def default_r_grid() -> np.ndarray:
    """log2 R from -6 to 6 in steps of 1/16."""
    return 2.0 ** np.arange(-6.0, 6.0 + 1e-9, 1.0 / 16.0)


def sweep(n: int, delta_phi: float, kernel: str = "sin",
          r_grid: np.ndarray | None = None,
          window: tuple[float, float] | None = None,
          omega_g: float = 1.0) -> list[SweepRow]:
    """Root sets across a (log-spaced) R grid with branch continuity ids."""
    if r_grid is None:
        r_grid = default_r_grid()
    rows: list[SweepRow] = []
    prev_roots: np.ndarray | None = None
    prev_ids: np.ndarray | None = None
    next_id = 0
    for r in np.asarray(r_grid, dtype=float):
        eqn = CharEqn(build_params(omega_g, n, r, delta_phi), kernel)
        rs = find_roots(eqn, window)
        ids = np.empty(rs.roots.size, dtype=int)
        fsr = TWO_PI / eqn.params.tau
        for k, root in enumerate(rs.roots):
            if prev_roots is not None and prev_roots.size:
                j = int(np.argmin(np.abs(prev_roots - root)))
                if abs(prev_roots[j] - root) < 0.5 * fsr:
                    ids[k] = prev_ids[j]
                    continue
            ids[k] = next_id
            next_id += 1
        rows.append(SweepRow(
            log2_R=float(np.log2(r)), R=float(r), roots=rs.roots,
            branch_ids=ids, marginal=rs.marginal,
        ))
        prev_roots, prev_ids = rs.roots, ids
    return rows
