"""Exceptions raised by skein-integrator."""

from typing import Any, ClassVar


class SkeinError(Exception):
    """Base class for all errors with a machine-readable code."""

    code: ClassVar[str] = "skein-error"

    def __init__(self, message: str, context: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.context = context or {}


class DiagramError(SkeinError, ValueError):
    """A planar diagram code is malformed or inconsistent."""

    code = "diagram-invalid"


class CrossingKindError(SkeinError, ValueError):
    """A crossing is absent or has the wrong kind for the operation."""

    code = "crossing-kind"


class MovePatternError(SkeinError, ValueError):
    """A move site does not match the local pattern of the diagram."""

    code = "move-pattern"


class CrossingCapExceededError(SkeinError):
    """A state sum was requested on a diagram above the crossing cap."""

    code = "crossing-cap"


class BudgetExceededError(SkeinError):
    """A bounded recursion ran out of budget."""

    code = "budget-exceeded"


class DescendingPathError(SkeinError):
    """A descending diagram could not be simplified to the unlink."""

    code = "descending-path"


class LoopNotClosedError(SkeinError, ValueError):
    """A loop does not return to its start diagram exactly."""

    code = "loop-not-closed"


class MissingBaseValueError(SkeinError, KeyError):
    """No integration constant was given for a component count."""

    code = "missing-base-value"

    def __str__(self) -> str:
        """Return the plain message instead of the quoted KeyError form."""
        return self.message


class CorpusGenerationError(SkeinError, ValueError):
    """A corpus could not be generated from the given seeds."""

    code = "corpus-generation"


class ExternalInvariantError(SkeinError):
    """An external invariant process failed to produce a value."""

    code = "external-invariant"
