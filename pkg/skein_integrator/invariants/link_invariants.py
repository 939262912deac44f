"""Link invariants shipped with the package."""

from typing import Annotated, ClassVar, Literal

from pydantic import Field

from skein_integrator.diagram import LinkDiagram, components
from skein_integrator.invariants.base_invariant import BaseLinkInvariant, Certificate
from skein_integrator.invariants.bracket import DEFAULT_CROSSING_CAP, jones_a
from skein_integrator.invariants.vassiliev import v2_gauss
from skein_integrator.ring import RingElem


class JonesInvariant(BaseLinkInvariant):
    """The Jones invariant in the variable A, computed by state sum."""

    invariant_name: Literal["jones"] = "jones"
    crossing_cap: int = Field(default=DEFAULT_CROSSING_CAP, ge=0)
    certificate: ClassVar[Certificate] = "proven-by-construction"

    def evaluate(self, d: LinkDiagram) -> RingElem:
        """Return ``(-A)**(-3 w) <d>``."""
        return jones_a(d, self.crossing_cap)


class V2Invariant(BaseLinkInvariant):
    """Degree-2 Vassiliev invariant of knots, extended by 0 to links."""

    invariant_name: Literal["v2"] = "v2"

    def evaluate(self, d: LinkDiagram) -> RingElem:
        """Return v2 as a constant polynomial."""
        if components(d) != 1:
            return RingElem.zero()
        return RingElem.from_int(v2_gauss(d))


class ConstantLinkInvariant(BaseLinkInvariant):
    """Takes the same value on every link."""

    invariant_name: Literal["constant"] = "constant"
    value: RingElem = RingElem.one()
    certificate: ClassVar[Certificate] = "proven-by-construction"

    def evaluate(self, d: LinkDiagram) -> RingElem:  # noqa: ARG002
        """Return the constant."""
        return self.value


LinkInvariant = Annotated[
    JonesInvariant | V2Invariant | ConstantLinkInvariant,
    Field(discriminator="invariant_name"),
]
