"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A state-family or configuration parameter is out of its valid range."""


class MixedStateError(ValueError):
    """Operation defined only for pure states was called with noise_fraction > 0."""


class DimensionError(ValueError):
    """Operation does not support the state's local dimension."""


class ArityError(ValueError):
    """Settings point does not match the functional's expected shape."""


class AxisError(ValueError):
    """Requested section axis is not a coordinate of the settings space."""


class NormalizationError(ValueError):
    """Relative normalization is undefined (reference fraction is zero or missing)."""


class ConfigError(ValueError):
    """Config file violates the schema (unknown key, bad value, missing entry)."""
