"""Semi-Lagrangian discontinuous Galerkin solver for 1+1 Vlasov-Poisson."""
from .core import DGField1D, DGField2D, Mesh2D, project, relative_l2_error
from .errors import (CompatibilityError, ConfigurationError, DiagnosticsError, DomainError,
                     LimiterError, SLDGError, UndefinedNormError)
from .scenarios import builtin_scenarios, get_scenario
from .splitting import Problem, SplitScheme, run

__all__ = [
    "CompatibilityError", "ConfigurationError", "DGField1D", "DGField2D", "DiagnosticsError",
    "DomainError", "LimiterError", "Mesh2D", "Problem", "SLDGError", "SplitScheme",
    "UndefinedNormError", "builtin_scenarios", "get_scenario", "project", "relative_l2_error", "run",
]
