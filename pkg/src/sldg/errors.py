"""Exception types raised by the solver."""


class SLDGError(Exception):
    """Base class for all solver errors."""


class ConfigurationError(SLDGError, ValueError):
    """Invalid parameters, orders, or configuration files."""


class DomainError(SLDGError, ValueError):
    """A point or field lies outside the mesh it is evaluated on."""


class UndefinedNormError(SLDGError, ZeroDivisionError):
    """A relative norm was requested against an identically zero reference."""


class CompatibilityError(SLDGError, ValueError):
    """Periodic Poisson data does not have zero mean."""


class LimiterError(SLDGError, RuntimeError):
    """A cell mean is negative beyond round-off before limiting."""


class DiagnosticsError(SLDGError, FloatingPointError):
    """A diagnostic integrand produced a non-finite value."""
