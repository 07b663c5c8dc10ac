"""Exception hierarchy shared by every motionguide module."""

from __future__ import annotations


class MotionGuideError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MotionGuideError):
    """A parameter is outside its legal range."""


class StructureError(MotionGuideError):
    """Skeleton, frame, or clip data violates a structural invariant."""


class ParseError(MotionGuideError):
    """Input text could not be parsed. Carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MapValidationError(MotionGuideError):
    """A joint-map table is inconsistent."""


class RetargetError(MotionGuideError):
    """A required source joint is missing from the input pose."""


class NormalizationError(MotionGuideError):
    """A pose cannot be normalized (missing joints or degenerate body)."""


class ComparisonError(MotionGuideError):
    """A joint needed for scoring is absent from one of the poses."""


class VizError(MotionGuideError):
    """Visualization geometry could not be generated."""


class SessionError(MotionGuideError):
    """A simulated session aborted; message carries the tick context."""
