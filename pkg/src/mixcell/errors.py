"""Exception types shared across the package."""


class MixcellError(Exception):
    """Base class for package-specific errors."""


class NonPositiveDistance(MixcellError):
    """A path-loss evaluation was requested at distance <= 0."""


class NonConvergence(MixcellError):
    """An adaptive integral exhausted its subdivision budget."""


class NonFiniteIntegrand(MixcellError):
    """An integrand returned NaN or +/-inf inside the integration domain."""


class DegenerateMix(MixcellError):
    """A metric was requested for a direction with zero active cell density."""


class TooFewSamples(MixcellError):
    """Not enough samples to build the requested statistic."""


class ConfigError(MixcellError):
    """A run configuration file is malformed or inconsistent."""
