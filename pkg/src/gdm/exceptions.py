"""Exception types raised across the package."""


class GdmError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(GdmError, ValueError):
    """Raised when input data is malformed (non-finite, empty, wrong shape)."""


class InvalidParameterError(GdmError, ValueError):
    """Raised when a tunable parameter is outside its allowed range."""


class DegenerateSpectrumError(GdmError):
    """Raised when a singular spectrum is identically zero."""


class DegenerateClusterError(GdmError):
    """Raised when a cluster is empty or its scaled data matrix vanishes."""


class InsufficientInliersError(GdmError):
    """Raised when outlier rejection would leave too few points to segment."""


class SceneGenerationError(GdmError):
    """Raised when a synthetic scene cannot be generated within retry limits."""
