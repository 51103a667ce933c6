"""
Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input problems -> 2,
hypothesis violations -> 3, exhausted search bounds -> 4.
"""

from typing import Dict, Optional


class ToricError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ToricError, ValueError):
    """Vectors or matrices of incompatible length/shape."""


class DomainError(ToricError, ValueError):
    """An argument lies outside the domain of the operation."""


class NotSimplicialError(DomainError):
    """Ray generators are linearly dependent."""


class HypothesisError(ToricError):
    """
    A checkable surrogate of a straightening hypothesis failed.

    Attributes:
        hypothesis: short name of the surrogate that broke
        diagnostics: structured notes for the report
    """

    def __init__(self, message: str, hypothesis: str, diagnostics: Optional[Dict] = None):
        super().__init__(message)
        self.hypothesis = hypothesis
        self.diagnostics = diagnostics or {}


class BezoutError(HypothesisError):
    """The root values along the curve share a zero: their gcd does not divide the target."""

    def __init__(self, gcd, diagnostics: Optional[Dict] = None):
        super().__init__(
            f"root values have common factor {gcd.as_expr()}; the field vanishes on the curve",
            hypothesis="non-vanishing",
            diagnostics=diagnostics,
        )
        self.gcd = gcd


class BoundExhaustedError(ToricError):
    """A bounded search ended without an answer; nothing was disproved."""

    def __init__(self, message: str, diagnostics: Optional[Dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ExtensionError(BoundExhaustedError):
    """No extension of a curve function was found up to the word-length bound."""

    def __init__(self, bound: int, diagnostics: Optional[Dict] = None):
        super().__init__(f"no extension found with word length <= {bound}", diagnostics)
        self.bound = bound


class JobError(ToricError, ValueError):
    """Schema violation in a job or word file."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
