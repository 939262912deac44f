"""Tests for the external invariant bridge."""

import sys
from collections.abc import Iterator
from pathlib import Path

import pytest

from skein_integrator.diagram import SingularDiagram, unlink
from skein_integrator.errors import ExternalInvariantError
from skein_integrator.invariants.external_invariant import ExternalInvariant
from skein_integrator.invariants.singular_invariants import DerivedInvariant
from skein_integrator.moves import CIRCLE, LEFT, MoveSite, apply_move, make_singular
from skein_integrator.tables import table_diagram

CHILD = Path(__file__).parent.parent / "fixtures" / "derived_jones_child.py"


def child_invariant(mode: str, timeout: float = 30.0) -> ExternalInvariant:
    """Bridge to the fixture server running in ``mode``."""
    return ExternalInvariant(command=(sys.executable, str(CHILD), mode), timeout=timeout)


@pytest.fixture
def diagrams() -> list[SingularDiagram]:
    """Provide a few order-1 diagrams."""
    curl = apply_move(unlink(1), MoveSite(kind="R1_add_pos", location=(CIRCLE, LEFT)))
    return [
        make_singular(curl, curl.crossings[0].id),
        make_singular(table_diagram("3_1"), 0),
        make_singular(table_diagram("4_1"), 1),
        make_singular(table_diagram("hopf"), 0),
    ]


@pytest.fixture
def serving() -> Iterator[ExternalInvariant]:
    """Provide a bridge to a well-behaved child, closed after the test."""
    invariant = child_invariant("serve")
    yield invariant
    invariant.close()


def test_external_matches_builtin(
    serving: ExternalInvariant, diagrams: list[SingularDiagram]
) -> None:
    """Test that the child answers exactly as the in-process invariant."""
    builtin = DerivedInvariant()
    for d in diagrams:
        assert serving.evaluate(d) == builtin.evaluate(d)


def test_close_is_idempotent(serving: ExternalInvariant, diagrams: list[SingularDiagram]) -> None:
    """Test that a closed bridge restarts its child on demand."""
    serving.close()
    serving.close()
    assert serving.evaluate(diagrams[0]).is_zero


def test_malformed_output(diagrams: list[SingularDiagram]) -> None:
    """Test that unparsable lines are reported."""
    invariant = child_invariant("malformed")
    try:
        with pytest.raises(ExternalInvariantError, match="Malformed") as excinfo:
            invariant.evaluate(diagrams[1])
        assert excinfo.value.context["line"] == "not a polynomial"
    finally:
        invariant.close()


def test_fractional_coefficient(diagrams: list[SingularDiagram]) -> None:
    """Test that a non-integer coefficient is rejected, not truncated."""
    invariant = child_invariant("fractional")
    try:
        with pytest.raises(ExternalInvariantError, match="Malformed") as excinfo:
            invariant.evaluate(diagrams[1])
        assert "1.5" in excinfo.value.context["line"]
    finally:
        invariant.close()


def test_child_exit(diagrams: list[SingularDiagram]) -> None:
    """Test that a child exiting mid-request is reported with its status."""
    invariant = child_invariant("exit")
    try:
        with pytest.raises(ExternalInvariantError, match="status 3"):
            invariant.evaluate(diagrams[0])
    finally:
        invariant.close()


def test_child_restarts_after_exit(diagrams: list[SingularDiagram]) -> None:
    """Test that every other request fails against a child that exits on its second."""
    invariant = child_invariant("alternate")
    builtin = DerivedInvariant()
    outcomes = []
    try:
        for d in diagrams:
            try:
                outcomes.append(invariant.evaluate(d) == builtin.evaluate(d))
            except ExternalInvariantError:
                outcomes.append(None)
    finally:
        invariant.close()
    assert outcomes == [True, None, True, None]


def test_timeout(diagrams: list[SingularDiagram]) -> None:
    """Test that a silent child is killed after the timeout."""
    invariant = child_invariant("silent", timeout=0.5)
    try:
        with pytest.raises(ExternalInvariantError, match="did not answer within 0.5 seconds"):
            invariant.evaluate(diagrams[0])
    finally:
        invariant.close()


def test_spawn_failure(diagrams: list[SingularDiagram], tmp_path: Path) -> None:
    """Test that a missing executable is reported."""
    invariant = ExternalInvariant(command=(str(tmp_path / "missing-server"),))
    with pytest.raises(ExternalInvariantError, match="Could not start"):
        invariant.evaluate(diagrams[0])


def test_command_must_not_be_empty() -> None:
    """Test the command validation."""
    with pytest.raises(ValueError, match="at least 1"):
        ExternalInvariant(command=())
