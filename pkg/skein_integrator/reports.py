"""Structured pass/fail reports."""

from typing import Any

from pydantic import BaseModel, ConfigDict, JsonValue, computed_field

from skein_integrator.errors import SkeinError
from skein_integrator.ring import RingElem


class Check(BaseModel):
    """A single named check."""

    name: str
    ok: bool
    detail: str = ""
    model_config = ConfigDict(frozen=True)


class Report(BaseModel):
    """Result of a group of checks with the witnesses that support it."""

    subject: str
    checks: tuple[Check, ...] = ()
    witnesses: tuple[JsonValue, ...] = ()
    model_config = ConfigDict(frozen=True)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        """Whether every check passed."""
        return all(check.ok for check in self.checks)

    def failed_checks(self) -> tuple[Check, ...]:
        """Return the checks that did not pass."""
        return tuple(check for check in self.checks if not check.ok)


class ErrorReport(BaseModel):
    """Machine-readable description of an error."""

    code: str
    message: str
    context: dict[str, Any] = {}
    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_exception(cls, error: Exception) -> "ErrorReport":
        """Build a report from any exception."""
        if isinstance(error, SkeinError):
            return cls(code=error.code, message=error.message, context=error.context)
        return cls(code=type(error).__name__, message=str(error))


class ValueReport(BaseModel):
    """Value of a named invariant on one diagram."""

    subject: str
    invariant: str
    value: RingElem
    resolutions: dict[str, RingElem] = {}
    model_config = ConfigDict(frozen=True)
