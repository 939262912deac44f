"""Tests for the tables module."""

import pytest

from skein_integrator.diagram import components, unlink, validate, writhe
from skein_integrator.errors import DiagramError
from skein_integrator.invariants.bracket import jones_a
from skein_integrator.tables import (
    BRAID_TABLE,
    PD_TABLE,
    connected_sum,
    from_braid,
    from_pd,
    table_diagram,
    table_names,
)


@pytest.mark.parametrize("name", sorted(PD_TABLE))
def test_table_entries_are_valid(name: str) -> None:
    """Test that every table entry builds a consistent diagram."""
    d = table_diagram(name)
    assert validate(d).ok
    assert d.crossing_count == len(PD_TABLE[name][0])


def test_from_pd_infers_signs() -> None:
    """Test that signs follow the direction of the over-strand."""
    right = from_pd([[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]])
    left = from_pd([[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]])
    assert {c.kind for c in right.crossings} == {"pos"}
    assert {c.kind for c in left.crossings} == {"neg"}


def test_from_pd_of_empty_code_is_unknot() -> None:
    """Test that an empty PD code is the unknot."""
    d = from_pd([])
    assert d.crossing_count == 0
    assert components(d) == 1


def test_from_pd_needs_kinds_for_two_arc_components() -> None:
    """Test that the Hopf link needs explicit kinds."""
    with pytest.raises(DiagramError, match="ambiguous"):
        from_pd([[1, 3, 2, 4], [3, 1, 4, 2]])
    hopf = from_pd([[1, 3, 2, 4], [3, 1, 4, 2]], ("pos", "pos"))
    assert writhe(hopf) == 2


def test_from_pd_rejects_bad_numbering() -> None:
    """Test that arcs must be numbered consecutively along each component."""
    with pytest.raises(DiagramError, match="not numbered consecutively"):
        from_pd([[1, 5, 2, 4], [3, 1, 4, 7], [5, 3, 7, 2]])


def test_from_pd_rejects_wrong_number_of_kinds() -> None:
    """Test that kinds must match the crossings."""
    with pytest.raises(DiagramError, match="Got 1 kinds for 2 crossings"):
        from_pd([[1, 3, 2, 4], [3, 1, 4, 2]], ("pos",))


def test_connected_sum_of_trefoils() -> None:
    """Test the granny knot built by connected sum."""
    trefoil = table_diagram("3_1")
    granny = connected_sum(trefoil, trefoil)
    assert granny.crossing_count == 6
    assert components(granny) == 1
    assert validate(granny).ok
    assert jones_a(granny) == jones_a(trefoil) * jones_a(trefoil)


def test_connected_sum_with_unknot() -> None:
    """Test that summing with a crossingless circle changes nothing."""
    trefoil = table_diagram("3_1")
    assert connected_sum(table_diagram("unknot"), trefoil) == trefoil
    assert connected_sum(trefoil, table_diagram("unknot")) == trefoil
    with_circle = connected_sum(trefoil, table_diagram("unlink_2"))
    assert components(with_circle) == 2


def test_table_names_and_aliases() -> None:
    """Test that aliases resolve to table entries."""
    names = table_names()
    assert {"trefoil", "figure_eight", "unknot", "3_1#3_1"} <= set(names)
    assert table_diagram("trefoil") == table_diagram("3_1")
    assert table_diagram("figure_eight") == table_diagram("4_1")


def test_unknown_table_name() -> None:
    """Test that unknown names raise DiagramError listing the known ones."""
    with pytest.raises(DiagramError, match="Unknown table diagram") as excinfo:
        table_diagram("9_42")
    assert "3_1" in excinfo.value.context["known"]


@pytest.mark.parametrize("name", sorted(BRAID_TABLE))
def test_braid_entries_are_valid(name: str) -> None:
    """Test that every braid closure in the table is a valid knot diagram."""
    d = table_diagram(name)
    assert validate(d).ok
    assert components(d) == 1
    assert d.crossing_count == len(BRAID_TABLE[name])
    assert writhe(d) == sum(1 if generator > 0 else -1 for generator in BRAID_TABLE[name])


def test_from_braid_matches_pd_entries() -> None:
    """Test that braid closures of the trefoil and figure eight agree with the PD table."""
    assert jones_a(from_braid((1, 1, 1))) == jones_a(table_diagram("3_1"))
    assert jones_a(from_braid((-1, -1, -1))) == jones_a(table_diagram("3_1_left"))
    assert jones_a(from_braid((1, -2, 1, -2))) == jones_a(table_diagram("4_1"))
    assert jones_a(from_braid((1, 1))) == jones_a(table_diagram("hopf"))


def test_from_braid_components() -> None:
    """Test that components follow the cycles of the braid permutation."""
    assert components(from_braid((1, 1))) == 2
    assert components(from_braid((1, 2))) == 1
    assert from_braid((), 2) == unlink(2)
    untouched = from_braid((1, 1, 1), 3)
    assert components(untouched) == 2
    assert untouched.zero_crossing_components == 1


def test_from_braid_rejects_bad_words() -> None:
    """Test that generators must fit on the strands."""
    with pytest.raises(DiagramError, match="does not fit on 2 strands"):
        from_braid((1, 0))
    with pytest.raises(DiagramError, match="does not fit on 2 strands"):
        from_braid((1, 2), 2)
