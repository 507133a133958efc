"""Exception hierarchy shared by all modules.

Every validation failure derives from :class:`ValidationError` so callers
(the CLI in particular) can map them to a single exit status.
"""


class ValidationError(ValueError):
    """Input data or configuration violates a documented constraint."""


class ParseError(ValidationError):
    """Malformed CSV or matrix file."""


class DimensionError(ValidationError):
    """Two items do not have the same number of variables."""


class ConfigurationError(ValidationError):
    """Inconsistent training or evaluation parameters."""
