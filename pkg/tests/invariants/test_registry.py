"""Tests for the registry module."""

import pytest

from skein_integrator.invariants.external_invariant import ExternalInvariant
from skein_integrator.invariants.link_invariants import JonesInvariant, V2Invariant
from skein_integrator.invariants.registry import (
    BUILTIN_INVARIANTS,
    builtin_invariants,
    lookup_invariant,
    lookup_link_invariant,
)
from skein_integrator.invariants.singular_invariants import (
    ConstantSingularInvariant,
    DerivedInvariant,
    PositiveResolutionInvariant,
)


def test_builtin_names() -> None:
    """Test the names offered on the command line."""
    assert sorted(BUILTIN_INVARIANTS) == [
        "constant",
        "derived-constant",
        "jones",
        "jonesplus",
        "v2",
    ]
    assert isinstance(BUILTIN_INVARIANTS["jonesplus"], PositiveResolutionInvariant)
    assert isinstance(BUILTIN_INVARIANTS["constant"], ConstantSingularInvariant)


def test_crossing_cap_reaches_jones() -> None:
    """Test that the cap is threaded into Jones-based entries."""
    invariants = builtin_invariants(crossing_cap=6)
    jones = invariants["jones"]
    assert isinstance(jones, DerivedInvariant)
    assert jones.link_invariant == JonesInvariant(crossing_cap=6)
    assert lookup_link_invariant("jones", crossing_cap=6) == JonesInvariant(crossing_cap=6)


def test_lookup_link_invariant() -> None:
    """Test lookup of link invariants by name."""
    assert lookup_link_invariant("v2") == V2Invariant()
    with pytest.raises(ValueError, match="Unknown link invariant 'alexander'"):
        lookup_link_invariant("alexander")


def test_lookup_invariant_with_extras() -> None:
    """Test that configured entries are found and take precedence."""
    server = ExternalInvariant(command=("server",))
    assert lookup_invariant("mine", {"mine": server}) is server
    assert lookup_invariant("jones", {"jones": server}) is server
    assert lookup_invariant("jones") == DerivedInvariant()
    with pytest.raises(ValueError, match="known: constant, derived-constant"):
        lookup_invariant("mine")
