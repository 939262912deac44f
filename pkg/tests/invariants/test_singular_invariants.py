"""Tests for derived and control singular invariants."""

import pytest

from skein_integrator.diagram import SingularDiagram, unlink
from skein_integrator.errors import CrossingKindError
from skein_integrator.invariants.bracket import jones_a
from skein_integrator.invariants.link_invariants import ConstantLinkInvariant, V2Invariant
from skein_integrator.invariants.singular_invariants import (
    ConstantSingularInvariant,
    DerivedInvariant,
    PositiveResolutionInvariant,
    derive_singular,
    second_difference,
)
from skein_integrator.moves import CIRCLE, LEFT, MoveSite, apply_move, make_singular
from skein_integrator.ring import RingElem
from skein_integrator.tables import table_diagram


@pytest.fixture
def kink() -> SingularDiagram:
    """Provide the minimal kink."""
    curl = apply_move(unlink(1), MoveSite(kind="R1_add_neg", location=(CIRCLE, LEFT)))
    return make_singular(curl, curl.crossings[0].id)


def test_derived_jones_vanishes_on_kink(kink: SingularDiagram) -> None:
    """Test that both resolutions of a kink are the unknot."""
    assert DerivedInvariant().evaluate(kink).is_zero


def test_derived_jones_on_singular_trefoil() -> None:
    """Test the difference across a trefoil crossing."""
    singular = make_singular(table_diagram("3_1"), 0)
    expected = jones_a(table_diagram("3_1")) - RingElem.one()
    assert DerivedInvariant().evaluate(singular) == expected


@pytest.mark.parametrize("invariant", [DerivedInvariant(), derive_singular(V2Invariant())])
def test_derived_agrees_across_trefoil_crossings(invariant: DerivedInvariant) -> None:
    """Test that the three singular trefoils, equivalent by symmetry, get one value."""
    trefoil = table_diagram("3_1")
    values = [invariant.evaluate(make_singular(trefoil, c.id)) for c in trefoil.crossings]
    assert len(values) == 3
    assert values[0] == values[1] == values[2]


def test_derived_v2_on_singular_trefoil() -> None:
    """Test that v2 drops by one across a trefoil crossing."""
    singular = make_singular(table_diagram("3_1"), 1)
    assert derive_singular(V2Invariant()).evaluate(singular) == RingElem.from_int(1)


def test_derived_constant_is_zero(kink: SingularDiagram) -> None:
    """Test that the derivative of a constant vanishes."""
    invariant = derive_singular(ConstantLinkInvariant())
    assert invariant.evaluate(kink).is_zero
    assert invariant.evaluate(make_singular(table_diagram("4_1"), 2)).is_zero


def test_positive_resolution(kink: SingularDiagram) -> None:
    """Test the control invariant that ignores the negative resolution."""
    invariant = PositiveResolutionInvariant()
    assert invariant.evaluate(kink) == RingElem.one()
    singular = make_singular(table_diagram("3_1"), 0)
    assert invariant.evaluate(singular) == jones_a(table_diagram("3_1"))


def test_constant_singular_checks_order() -> None:
    """Test that the constant still needs exactly one double point."""
    invariant = ConstantSingularInvariant(value=RingElem.from_int(7))
    assert invariant.evaluate(make_singular(table_diagram("3_1"), 0)) == RingElem.from_int(7)
    order2 = make_singular(make_singular(table_diagram("3_1"), 0), 1)
    with pytest.raises(CrossingKindError, match="one double point"):
        invariant.evaluate(order2)
    with pytest.raises(CrossingKindError):
        invariant.evaluate(table_diagram("3_1"))


def test_second_difference_is_symmetric() -> None:
    """Test the order-2 difference in both labelings."""
    trefoil = table_diagram("3_1")
    order2 = make_singular(make_singular(trefoil, 0), 1)
    jones = DerivedInvariant().link_invariant
    expected = jones_a(trefoil) - RingElem.one()
    assert second_difference(jones, order2, 0, 1) == expected
    assert second_difference(jones, order2, 1, 0) == expected
