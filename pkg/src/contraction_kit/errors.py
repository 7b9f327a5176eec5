"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class InvalidWeightError(ValueError):
    """A weighted norm was given a non-symmetric or non-positive-definite weight."""


class RankDeficiencyError(ValueError):
    """A map that must have full row rank is numerically rank deficient."""


class CatalogError(ValueError):
    """Unknown built-in system name."""


class EvaluationError(RuntimeError):
    """A vector field produced non-finite values."""


class DivergenceError(RuntimeError):
    """A trajectory left the representable range during integration."""


class NonConvergenceError(RuntimeError):
    """Fixed-point iteration failed to converge within the iteration budget."""


class StabilityError(ValueError):
    """Requested time step violates the explicit stability limit."""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""
