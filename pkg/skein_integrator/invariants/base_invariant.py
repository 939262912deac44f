"""Base classes for link invariants and singular link invariants."""

from abc import ABC, abstractmethod
from typing import ClassVar, Literal

from pydantic import BaseModel, ConfigDict

from skein_integrator.diagram import LinkDiagram, SingularDiagram
from skein_integrator.errors import CrossingKindError
from skein_integrator.ring import RingElem

Certificate = Literal["proven-by-construction", "test-verified"]


class BaseLinkInvariant(ABC, BaseModel):
    """A ring-valued function on link diagrams that ignores Reidemeister moves."""

    certificate: ClassVar[Certificate] = "test-verified"
    model_config = ConfigDict(frozen=True)

    @abstractmethod
    def evaluate(self, d: LinkDiagram) -> RingElem:
        """Evaluate the invariant on a link diagram."""


class BaseSingularInvariant(ABC, BaseModel):
    """A ring-valued function on singular link diagrams with one double point."""

    model_config = ConfigDict(frozen=True)

    @abstractmethod
    def evaluate(self, d: SingularDiagram) -> RingElem:
        """Evaluate the invariant on an order-1 singular diagram."""

    def close(self) -> None:
        """Release resources held by the invariant."""


def double_point(d: SingularDiagram) -> int:
    """Return the id of the only double point of an order-1 diagram."""
    points = d.singular_ids()
    if len(points) != 1:
        msg = f"Expected one double point, got {len(points)}"
        raise CrossingKindError(msg, {"double_points": list(points)})
    return points[0]
