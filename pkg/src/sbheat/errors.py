"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A model, chain or run configuration is invalid or unsupported."""


class CapabilityError(NotImplementedError):
    """The requested evaluation is not available for this model."""


class HeatOverflowError(OverflowError):
    """An exponential heat factor left the representable range."""


class QuadratureSpecError(ValueError):
    """Quadrature settings violate their own preconditions."""
