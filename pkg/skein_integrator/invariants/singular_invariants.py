"""Singular link invariants: derivatives of link invariants and controls."""

from typing import Literal

from pydantic import Field

from skein_integrator.diagram import SingularDiagram
from skein_integrator.invariants.base_invariant import BaseSingularInvariant, double_point
from skein_integrator.invariants.link_invariants import JonesInvariant, LinkInvariant
from skein_integrator.moves import ResolutionSign, resolve
from skein_integrator.ring import RingElem


class DerivedInvariant(BaseSingularInvariant):
    """``f(L) = F(L+) - F(L-)`` for a link invariant F."""

    invariant_name: Literal["derived"] = "derived"
    link_invariant: LinkInvariant = Field(default_factory=JonesInvariant)

    def evaluate(self, d: SingularDiagram) -> RingElem:
        """Difference of F on the two resolutions of the double point."""
        p = double_point(d)
        positive = resolve(d, p, "plus").as_link()
        negative = resolve(d, p, "minus").as_link()
        return self.link_invariant.evaluate(positive) - self.link_invariant.evaluate(negative)


class PositiveResolutionInvariant(BaseSingularInvariant):
    """``f(L) = F(L+)``, which fails both local integrability conditions."""

    invariant_name: Literal["positive_resolution"] = "positive_resolution"
    link_invariant: LinkInvariant = Field(default_factory=JonesInvariant)

    def evaluate(self, d: SingularDiagram) -> RingElem:
        """F on the positive resolution."""
        return self.link_invariant.evaluate(resolve(d, double_point(d), "plus").as_link())


class ConstantSingularInvariant(BaseSingularInvariant):
    """Takes the same value on every singular link."""

    invariant_name: Literal["constant"] = "constant"
    value: RingElem = RingElem.one()

    def evaluate(self, d: SingularDiagram) -> RingElem:
        """Return the constant after checking the order."""
        double_point(d)
        return self.value


def derive_singular(link_invariant: LinkInvariant) -> DerivedInvariant:
    """Return the singular invariant ``F(L+) - F(L-)``."""
    return DerivedInvariant(link_invariant=link_invariant)


def second_difference(
    link_invariant: LinkInvariant, d: SingularDiagram, p: int, q: int
) -> RingElem:
    """``F(L++) - F(L-+) - F(L+-) + F(L--)`` of an order-2 diagram.

    The first sign resolves ``p``, the second ``q``.
    """
    corners: tuple[tuple[ResolutionSign, ResolutionSign, int], ...] = (
        ("plus", "plus", 1),
        ("minus", "plus", -1),
        ("plus", "minus", -1),
        ("minus", "minus", 1),
    )
    total = RingElem.zero()
    for p_sign, q_sign, weight in corners:
        resolved = resolve(resolve(d, p, p_sign), q, q_sign).as_link()
        total += link_invariant.evaluate(resolved).scale(weight)
    return total
