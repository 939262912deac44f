"""Named link and singular invariants available on the command line."""

from collections.abc import Mapping
from typing import Annotated

from pydantic import Field

from skein_integrator.invariants.bracket import DEFAULT_CROSSING_CAP
from skein_integrator.invariants.external_invariant import ExternalInvariant
from skein_integrator.invariants.link_invariants import (
    ConstantLinkInvariant,
    JonesInvariant,
    LinkInvariant,
    V2Invariant,
)
from skein_integrator.invariants.singular_invariants import (
    ConstantSingularInvariant,
    DerivedInvariant,
    PositiveResolutionInvariant,
)

SingularInvariant = Annotated[
    DerivedInvariant | PositiveResolutionInvariant | ConstantSingularInvariant | ExternalInvariant,
    Field(discriminator="invariant_name"),
]


def builtin_link_invariants(
    crossing_cap: int = DEFAULT_CROSSING_CAP,
) -> dict[str, LinkInvariant]:
    """Link invariants shipped with the package, keyed by name."""
    return {
        "jones": JonesInvariant(crossing_cap=crossing_cap),
        "v2": V2Invariant(),
        "constant": ConstantLinkInvariant(),
    }


def builtin_invariants(
    crossing_cap: int = DEFAULT_CROSSING_CAP,
) -> dict[str, SingularInvariant]:
    """Singular invariants shipped with the package, keyed by name."""
    jones = JonesInvariant(crossing_cap=crossing_cap)
    return {
        "jones": DerivedInvariant(link_invariant=jones),
        "v2": DerivedInvariant(link_invariant=V2Invariant()),
        "constant": ConstantSingularInvariant(),
        "derived-constant": DerivedInvariant(link_invariant=ConstantLinkInvariant()),
        "jonesplus": PositiveResolutionInvariant(link_invariant=jones),
    }


BUILTIN_INVARIANTS = builtin_invariants()


def lookup_link_invariant(
    name: str, crossing_cap: int = DEFAULT_CROSSING_CAP
) -> LinkInvariant:
    """Return the link invariant registered under ``name``.

    Raises
    ------
    ValueError
        If no link invariant has that name.
    """
    registry = builtin_link_invariants(crossing_cap)
    if name not in registry:
        msg = f"Unknown link invariant {name!r}; known: {', '.join(sorted(registry))}"
        raise ValueError(msg)
    return registry[name]


def lookup_invariant(
    name: str,
    extra: Mapping[str, SingularInvariant] | None = None,
    crossing_cap: int = DEFAULT_CROSSING_CAP,
) -> SingularInvariant:
    """Return the singular invariant registered under ``name``.

    Entries of ``extra`` take precedence over the built-in ones.

    Raises
    ------
    ValueError
        If no invariant has that name.
    """
    registry = {**builtin_invariants(crossing_cap), **(extra or {})}
    if name not in registry:
        msg = f"Unknown invariant {name!r}; known: {', '.join(sorted(registry))}"
        raise ValueError(msg)
    return registry[name]
