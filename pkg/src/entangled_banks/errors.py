"""Exception hierarchy shared across the package."""


class ModelError(Exception):
    """Base class for every error raised by the model."""


class StructuralError(ModelError, ValueError):
    """A parameter violates a structural invariant (n, r, signs, ranges).

    ``field`` names the offending parameter.
    """

    def __init__(self, field, message):
        super().__init__(message)
        self.field = field


class RestrictionError(ModelError):
    """Parameters are structurally sound but violate a model restriction."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateModelError(ModelError):
    """A closed form has a non-positive denominator or an empty domain."""


class EnumerationLimitError(ModelError, ValueError):
    pass
