"""Exception types shared across the package."""


class EpimooError(Exception):
    """Base class for package errors."""


class ConfigError(EpimooError):
    """Invalid configuration: unknown keys, bad values, unresolvable names."""


class DimensionError(EpimooError, ValueError):
    """Vector length mismatch or unsupported objective count."""


class MetricError(EpimooError, ValueError):
    """Degenerate metric input: empty sets, zero baselines, ragged traces."""


class DegenerateSampleError(EpimooError, ValueError):
    """Statistical sample carries no usable evidence (all differences zero)."""
