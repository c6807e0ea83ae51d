"""Exception types raised by the halfcavity package.

Each class maps to one machine-readable error category used by the CLI
(`category` attribute); library users can catch `HalfCavityError` to get
all of them at once.
"""


class HalfCavityError(Exception):
    """Base class for all package errors."""

    category = "error"


class ParameterDomainError(HalfCavityError, ValueError):
    """A physical parameter is outside its allowed domain."""

    category = "parameter-domain"


class GridResolutionError(HalfCavityError, ValueError):
    """A mode-grid invariant (resolution or bandwidth) is violated."""

    category = "grid-resolution"


class StructuralError(HalfCavityError, ValueError):
    """Array shapes or dimensions are inconsistent."""

    category = "structural"


class StepSizeError(HalfCavityError, ValueError):
    """Integration step exceeds the explicit-scheme accuracy bound."""

    category = "step-size"


class IntegrationDiagnosticError(HalfCavityError, RuntimeError):
    """Post-integration diagnostic (norm drift) out of budget."""

    category = "integration-diagnostic"


class PerturbationDomainError(HalfCavityError, ValueError):
    """Requested perturbation has no norm-preserving solution."""

    category = "perturbation-domain"


class AnalysisError(HalfCavityError, ValueError):
    """A trajectory is unsuitable for the requested analysis."""

    category = "analysis"


class RootSearchError(HalfCavityError, ValueError):
    """Root scan resolution too coarse, or no transition found."""

    category = "root-search"


class EigensolverError(HalfCavityError, RuntimeError):
    """The eigensolver failed to converge."""

    category = "eigensolver"
