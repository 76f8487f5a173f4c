"""Exception hierarchy for gencurv.

All errors derive from ValueError so callers that only know about bad input
can keep catching ValueError.
"""

from typing import Optional


class GencurvError(ValueError):
    """Base class for every gencurv error."""


class DimensionError(GencurvError):
    """Tensor shapes do not fit the requested operation."""


class SingularityError(GencurvError):
    """A bilinear form that must be nondegenerate is degenerate."""


class InvalidInputError(GencurvError):
    """Input violates a schema, range or family constraint.

    Args:
        message: Human readable description
        location: Optional "path:line" anchor for file-based input
    """

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class UnsupportedError(GencurvError):
    """Input is well formed but outside the supported scope."""


__all__ = [
    "GencurvError",
    "DimensionError",
    "SingularityError",
    "InvalidInputError",
    "UnsupportedError",
]
