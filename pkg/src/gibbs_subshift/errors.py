"""Exception Hierarchy.

All failures raised by the library derive from :class:`GibbsSubshiftError`.
The subclasses also inherit from the closest builtin so callers that only
know about ``ValueError`` or ``RuntimeError`` keep working.
"""

from __future__ import annotations

from typing import Any


class GibbsSubshiftError(Exception):
    """Base class for every library error."""

    def __init__(
        self, message: str, diagnostics: list[dict[str, Any]] | None = None
    ) -> None:
        """Initialize the error.

        Args:
        ----
            message: Human readable description
            diagnostics: Optional machine readable details

        """
        super().__init__(message)
        self.message = message
        self.diagnostics = diagnostics or [{"path": "", "message": message}]


class UsageError(GibbsSubshiftError, ValueError):
    """Arguments are inconsistent with each other."""


class DomainError(GibbsSubshiftError, ValueError):
    """A mathematically required object is missing or undefined."""


class ResourceError(GibbsSubshiftError, RuntimeError):
    """A configured enumeration or element budget would be exceeded."""


class ValidationError(GibbsSubshiftError, ValueError):
    """Input data failed validation."""
