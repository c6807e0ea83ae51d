"""Simulator and stability toolkit for a two-level emitter in a microcavity
with coherent time-delayed mirror feedback, restricted to the one-excitation
subspace."""

from .errors import (
    AnalysisError,
    EigensolverError,
    GridResolutionError,
    HalfCavityError,
    IntegrationDiagnosticError,
    ParameterDomainError,
    PerturbationDomainError,
    RootSearchError,
    StepSizeError,
    StructuralError,
)
from .model import (
    ModeGrid,
    PhysicalParams,
    build_couplings,
    build_grid,
    build_params,
    coupling_angle,
    default_grid,
)
from .stationary import DarkState, alpha_closed_form, dark_state, stationarity_residual
from .dynamics import (
    BeatSpectrum,
    Trajectory,
    WaveFunction,
    apply_generator,
    beat_spectrum,
    derivative,
    integrate,
    max_step,
    perturb_stationary,
)
from .stability import (
    JacobianOperator,
    ModeSpectrum,
    build_jacobian,
    eigenmodes,
    generator_matrix,
    visible_frequencies,
)
from .spectrum import (
    CharEqn,
    CriticalRatio,
    RootSet,
    char_fn,
    critical_ratio,
    default_r_grid,
    default_window,
    find_roots,
    product_law,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisError", "BeatSpectrum", "CharEqn", "CriticalRatio", "DarkState",
    "EigensolverError", "GridResolutionError", "HalfCavityError",
    "IntegrationDiagnosticError", "JacobianOperator", "ModeGrid",
    "ModeSpectrum", "ParameterDomainError", "PerturbationDomainError",
    "PhysicalParams", "RootSearchError", "RootSet", "StepSizeError",
    "StructuralError", "Trajectory", "WaveFunction", "alpha_closed_form",
    "apply_generator", "beat_spectrum", "build_couplings", "build_grid",
    "build_jacobian", "build_params", "char_fn", "coupling_angle",
    "critical_ratio", "dark_state", "default_grid", "default_r_grid",
    "default_window", "derivative", "eigenmodes", "find_roots",
    "generator_matrix", "integrate", "max_step", "perturb_stationary",
    "product_law", "stationarity_residual", "sweep", "visible_frequencies",
    "__version__",
]
