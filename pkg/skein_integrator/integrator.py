"""Homotopy paths, loop defects and integration of singular invariants.

A path starts at a link diagram and applies moves and crossing changes. A
change to a positive crossing has epsilon +1 and a change to a negative one
has epsilon -1. For ``f = F(L+) - F(L-)`` the value of F at the start of a
path is its value at the end minus the signed sum of ``f`` over the changes,
so ``evaluate_path`` carries the value at the end of a path back to its start.
"""

import random
from collections.abc import Iterator, Mapping, Sequence
from typing import Annotated, Literal, Self, assert_never

from logzero import logger
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from skein_integrator.diagram import (
    LinkDiagram,
    SingularDiagram,
    basepoint_options,
    canonical,
    components,
    non_descending_crossings,
)
from skein_integrator.errors import (
    CrossingKindError,
    DescendingPathError,
    DiagramError,
    LoopNotClosedError,
    MissingBaseValueError,
    MovePatternError,
    SkeinError,
)
from skein_integrator.invariants.base_invariant import BaseSingularInvariant
from skein_integrator.moves import (
    CROSSING_DELTA,
    MoveKind,
    MoveSite,
    apply_move,
    apply_move_tracked,
    crossing_change,
    enumerate_move_sites,
    inverse_site,
    make_singular,
    resolve,
    simplify_with_witness,
)
from skein_integrator.reports import Check, Report
from skein_integrator.ring import RingElem, ring_sum
from skein_integrator.workers import ordered_map

SignedKind = Literal["pos", "neg"]

# Basepoint choices descending_path tries before giving up.
MAX_BASEPOINT_ATTEMPTS = 8


class MoveEvent(BaseModel):
    """A move applied along the path."""

    type: Literal["move"] = "move"
    kind: MoveKind
    location: tuple[int, ...]
    model_config = ConfigDict(frozen=True)

    @classmethod
    def from_site(cls, site: MoveSite) -> Self:
        """Wrap a move site."""
        return cls(kind=site.kind, location=site.location)

    @property
    def site(self) -> MoveSite:
        """The move site of this event."""
        return MoveSite(kind=self.kind, location=self.location)


class ChangeEvent(BaseModel):
    """A crossing change passing through a double point."""

    type: Literal["change"] = "change"
    crossing: int
    to: SignedKind
    model_config = ConfigDict(frozen=True)

    @property
    def epsilon(self) -> int:
        """+1 for a change to a positive crossing, -1 otherwise."""
        return 1 if self.to == "pos" else -1


PathEvent = Annotated[MoveEvent | ChangeEvent, Field(discriminator="type")]


class HomotopyPath(BaseModel):
    """A start diagram and the events applied to it."""

    start: LinkDiagram
    events: tuple[PathEvent, ...] = ()
    model_config = ConfigDict(frozen=True)


class LoopPath(HomotopyPath):
    """A path whose replay ends at exactly its start diagram."""

    @model_validator(mode="after")
    def _closes(self) -> Self:
        end, _ = replay(self)
        if end.to_json() != self.start.to_json():
            msg = "Loop does not return to its start diagram"
            raise ValueError(msg)
        return self


class SingularEvent(BaseModel):
    """The double point a change passes through, with its epsilon."""

    index: int
    diagram: SingularDiagram
    epsilon: Literal[1, -1]
    model_config = ConfigDict(frozen=True)


class AuditEntry(BaseModel):
    """Contribution of one change to a loop defect."""

    index: int
    epsilon: Literal[1, -1]
    value: RingElem
    model_config = ConfigDict(frozen=True)


class LoopAuditReport(BaseModel):
    """Loop defect with its per-change breakdown."""

    closed: bool
    defect: RingElem
    entries: tuple[AuditEntry, ...]
    model_config = ConfigDict(frozen=True)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        """Whether the loop closes and its defect vanishes."""
        return self.closed and self.defect.is_zero


def _opposite(kind: SignedKind) -> SignedKind:
    return "neg" if kind == "pos" else "pos"


def _apply_change(d: SingularDiagram, event: ChangeEvent) -> tuple[SingularDiagram, SingularDiagram]:
    crossing = d.crossing(event.crossing)
    if crossing.is_singular:
        msg = f"Cannot change double point {event.crossing}"
        raise CrossingKindError(msg, {"crossing": event.crossing})
    if crossing.kind == event.to:
        msg = f"Crossing {event.crossing} is already {event.to}"
        raise CrossingKindError(msg, {"crossing": event.crossing})
    singular = make_singular(d, event.crossing)
    return resolve(singular, event.crossing, "plus" if event.to == "pos" else "minus"), singular


def _states(path: HomotopyPath) -> tuple[list[SingularDiagram], list[SingularEvent]]:
    """Diagrams before each event and after the last, and the double points passed."""
    states: list[SingularDiagram] = [path.start]
    singular_events = []
    for index, event in enumerate(path.events):
        current = states[-1]
        try:
            match event:
                case MoveEvent():
                    states.append(apply_move(current, event.site))
                case ChangeEvent():
                    after, singular = _apply_change(current, event)
                    states.append(after)
                    singular_events.append(
                        SingularEvent(
                            index=index,
                            diagram=singular,
                            epsilon=1 if event.epsilon > 0 else -1,
                        )
                    )
                case _ as unexpected_event:
                    assert_never(unexpected_event)
        except SkeinError as e:
            e.context.setdefault("event", index)
            raise
    return states, singular_events


def replay(path: HomotopyPath) -> tuple[LinkDiagram, list[SingularEvent]]:
    """Replay a path, returning its end and the double points of its changes."""
    states, singular_events = _states(path)
    return states[-1].as_link(), singular_events


def _signed_sum(f: BaseSingularInvariant, singular_events: Sequence[SingularEvent]) -> RingElem:
    return ring_sum([f.evaluate(event.diagram).scale(event.epsilon) for event in singular_events])


def evaluate_path(
    f: BaseSingularInvariant, path: HomotopyPath, base_value: RingElem
) -> RingElem:
    """Return ``base_value - sum(epsilon f)`` over the changes of the path.

    ``base_value`` is the value at the end of the path. With ``f`` derived
    from ``F`` and ``base_value = F(end)`` the result is ``F(start)``.
    """
    _, singular_events = replay(path)
    return base_value - _signed_sum(f, singular_events)


def loop_defect(f: BaseSingularInvariant, loop: LoopPath) -> RingElem:
    """Signed sum of ``f`` over the double points a loop passes."""
    _, singular_events = replay(loop)
    return _signed_sum(f, singular_events)


def loop_audit(f: BaseSingularInvariant, loop: HomotopyPath) -> LoopAuditReport:
    """Loop defect with closure check and one entry per change."""
    end, singular_events = replay(loop)
    entries = tuple(
        AuditEntry(index=event.index, epsilon=event.epsilon, value=f.evaluate(event.diagram))
        for event in singular_events
    )
    defect = ring_sum([entry.value.scale(entry.epsilon) for entry in entries])
    closed = end.to_json() == loop.start.to_json()
    logger.info(f"Loop of {len(loop.events)} events: closed={closed}, defect={defect}")
    return LoopAuditReport(closed=closed, defect=defect, entries=entries)


def as_loop(path: HomotopyPath) -> LoopPath:
    """Check that a path closes and return it as a loop.

    Raises
    ------
    LoopNotClosedError
        If the path ends anywhere but its start diagram.
    """
    end, _ = replay(path)
    if end.to_json() != path.start.to_json():
        msg = "Path does not return to its start diagram"
        raise LoopNotClosedError(msg, {"start": path.start.to_json(), "end": end.to_json()})
    return LoopPath.model_construct(start=path.start, events=path.events)


def inverse_path(path: HomotopyPath) -> HomotopyPath:
    """Traverse a path backwards, undoing changes and inverting moves exactly.

    Raises
    ------
    MovePatternError
        If a move has no exact inverse.
    """
    states, _ = _states(path)
    inverted: list[MoveEvent | ChangeEvent] = []
    for index in reversed(range(len(path.events))):
        event = path.events[index]
        match event:
            case ChangeEvent():
                inverted.append(ChangeEvent(crossing=event.crossing, to=_opposite(event.to)))
            case MoveEvent():
                site = inverse_site(states[index], event.site)
                if site is None:
                    msg = f"Move {event.kind} at {event.location} has no exact inverse"
                    raise MovePatternError(msg, {"event": index})
                inverted.append(MoveEvent.from_site(site))
            case _ as unexpected_event:
                assert_never(unexpected_event)
    return HomotopyPath(start=states[-1].as_link(), events=tuple(inverted))


def concatenate(first: HomotopyPath, second: HomotopyPath) -> HomotopyPath:
    """Follow ``first`` and then ``second``."""
    end, _ = replay(first)
    if end.to_json() != second.start.to_json():
        msg = "The first path does not end where the second starts"
        raise DiagramError(msg, {"end": end.to_json(), "start": second.start.to_json()})
    return HomotopyPath(start=first.start, events=first.events + second.events)


def palindrome(path: HomotopyPath) -> LoopPath:
    """The loop that follows a path and then retraces it."""
    return as_loop(concatenate(path, inverse_path(path)))


def conjugate(gamma: HomotopyPath, loop: LoopPath) -> LoopPath:
    """The loop ``gamma``, then ``loop`` at the end of ``gamma``, then ``gamma`` backwards."""
    return as_loop(concatenate(concatenate(gamma, loop), inverse_path(gamma)))


def _invertible_move(d: SingularDiagram, rng: random.Random, max_crossings: int) -> MoveSite | None:
    candidates = [
        site
        for site in enumerate_move_sites(d)
        if d.crossing_count + CROSSING_DELTA[site.kind] <= max_crossings
    ]
    rng.shuffle(candidates)
    for site in candidates:
        if inverse_site(d, site) is not None:
            return site
    return None


def random_path(
    start: LinkDiagram,
    length: int,
    rng: random.Random,
    max_crossings: int = 10,
    *,
    changes: bool = True,
) -> HomotopyPath:
    """Random path of exactly invertible moves and, optionally, crossing changes."""
    current: SingularDiagram = start
    events: list[MoveEvent | ChangeEvent] = []
    for _ in range(length):
        if changes and current.crossings and rng.random() < 1 / 3:
            crossing = rng.choice(current.crossings)
            change = ChangeEvent(
                crossing=crossing.id, to=_opposite("pos" if crossing.kind == "pos" else "neg")
            )
            current, _ = _apply_change(current, change)
            events.append(change)
        else:
            site = _invertible_move(current, rng, max_crossings)
            if site is None:
                break
            current = apply_move(current, site)
            events.append(MoveEvent.from_site(site))
    return HomotopyPath(start=start, events=tuple(events))


def gen_loop_kink(start: LinkDiagram, seed: int) -> LoopPath:
    """Add a positive curl, change it to negative and remove it again."""
    rng = random.Random(seed)
    start = canonical(start).as_link()
    site = rng.choice(enumerate_move_sites(start, ("R1_add_pos",)))
    (curl,) = apply_move_tracked(start, site).created
    events = (
        MoveEvent.from_site(site),
        ChangeEvent(crossing=curl, to="neg"),
        MoveEvent(kind="R1_remove", location=(curl,)),
    )
    return as_loop(HomotopyPath(start=start, events=events))


def gen_loop_commutator(start: LinkDiagram, c1: int, c2: int) -> LoopPath:
    """Change two crossings and then change them back in the same order."""
    if c1 == c2:
        msg = "The commutator loop needs two different crossings"
        raise CrossingKindError(msg, {"crossings": [c1, c2]})
    first, second = start.crossing(c1), start.crossing(c2)
    kinds: list[SignedKind] = []
    for crossing in (first, second):
        if crossing.is_singular:
            msg = f"Crossing {crossing.id} is a double point"
            raise CrossingKindError(msg, {"crossing": crossing.id})
        kinds.append("pos" if crossing.kind == "pos" else "neg")
    events = (
        ChangeEvent(crossing=c1, to=_opposite(kinds[0])),
        ChangeEvent(crossing=c2, to=_opposite(kinds[1])),
        ChangeEvent(crossing=c1, to=kinds[0]),
        ChangeEvent(crossing=c2, to=kinds[1]),
    )
    return as_loop(HomotopyPath(start=start, events=events))


def _structured_loop(start: LinkDiagram, rng: random.Random) -> LoopPath:
    if start.crossing_count >= 2 and rng.random() < 1 / 2:  # noqa: PLR2004
        c1, c2 = rng.sample([c.id for c in start.crossings], 2)
        return gen_loop_commutator(start, c1, c2)
    return gen_loop_kink(start, rng.randrange(2**32))


def gen_loop_conjugated(start: LinkDiagram, seed: int, length: int = 3) -> LoopPath:
    """A kink or commutator loop carried along a random path and back."""
    rng = random.Random(seed)
    start = canonical(start).as_link()
    gamma = random_path(start, length, rng, max(start.crossing_count + 2, 4))
    end, _ = replay(gamma)
    return conjugate(gamma, _structured_loop(end, rng))


def gen_loop_composite(start: LinkDiagram, seed: int, count: int = 2) -> LoopPath:
    """Several kink, commutator and conjugated loops at one start, one after another."""
    rng = random.Random(seed)
    start = canonical(start).as_link()
    loops: list[HomotopyPath] = []
    for _ in range(count):
        if rng.random() < 1 / 3:
            loops.append(gen_loop_conjugated(start, rng.randrange(2**32)))
        else:
            loops.append(_structured_loop(start, rng))
    combined = HomotopyPath(start=start)
    for loop in loops:
        combined = concatenate(combined, loop)
    return as_loop(combined)


def _switching_path(
    d: LinkDiagram, switches: Sequence[int], budget: int
) -> tuple[HomotopyPath, bool]:
    """Switch crossings in order, then simplify; report whether the unlink was reached."""
    current = d
    events: list[MoveEvent | ChangeEvent] = []
    for crossing_id in switches:
        kind = current.crossing(crossing_id).kind
        events.append(
            ChangeEvent(crossing=crossing_id, to=_opposite("pos" if kind == "pos" else "neg"))
        )
        current, _ = crossing_change(current, crossing_id)
    result = simplify_with_witness(current, budget)
    events.extend(MoveEvent.from_site(site) for site in result.witness)
    path = HomotopyPath(start=d, events=tuple(events))
    return path, result.diagram.crossing_count == 0


def descending_path(
    d: LinkDiagram, budget: int, basepoints: Sequence[tuple[int, ...]] | None = None
) -> HomotopyPath:
    """Path of crossing changes making ``d`` descending, then moves to the unlink.

    Basepoint choices are tried in order of the number of changes they need.

    Raises
    ------
    DescendingPathError
        If no tried choice simplifies to the crossingless unlink within
        ``budget``; the context holds the last partial path.
    """
    options = list(basepoints) if basepoints is not None else basepoint_options(d)
    partial = HomotopyPath(start=d)
    for starts in options[:MAX_BASEPOINT_ATTEMPTS]:
        path, reached = _switching_path(d, non_descending_crossings(d, starts), budget)
        if reached:
            return path
        logger.debug(f"descending_path: basepoints {starts} did not reach the unlink")
        partial = path
    msg = f"Could not simplify a descending diagram of {d.crossing_count} crossings to the unlink"
    raise DescendingPathError(msg, {"partial_path": partial.model_dump(mode="json")})


def _integrate_along(
    f: BaseSingularInvariant, path: HomotopyPath, base: Mapping[int, RingElem]
) -> RingElem:
    end, _ = replay(path)
    if end.crossings:
        msg = "Path does not end at a crossingless unlink"
        raise DescendingPathError(msg, {"partial_path": path.model_dump(mode="json")})
    m = end.components
    if m not in base:
        msg = f"No base value for the {m}-component unlink"
        raise MissingBaseValueError(msg, {"components": m})
    return evaluate_path(f, path, base[m])


def integrate_with_path(
    f: BaseSingularInvariant,
    d: LinkDiagram,
    base: Mapping[int, RingElem],
    budget: int,
) -> tuple[RingElem, HomotopyPath]:
    """Integrate ``f`` at ``d`` and return the descending path used as witness."""
    m = components(d)
    if m not in base:
        msg = f"No base value for the {m}-component unlink"
        raise MissingBaseValueError(msg, {"components": m})
    path = descending_path(d, budget)
    return _integrate_along(f, path, base), path


def integrate(
    f: BaseSingularInvariant,
    d: LinkDiagram,
    base: Mapping[int, RingElem],
    budget: int,
) -> RingElem:
    """Integrate ``f`` to a link invariant with constants ``base`` on unlinks.

    Walks the descending path from ``d`` to the unlink with ``m`` components
    and returns ``base[m]`` minus the signed sum of ``f`` along it.
    """
    value, _ = integrate_with_path(f, d, base, budget)
    return value


def _candidate_paths(d: LinkDiagram, budget: int, rng: random.Random) -> Iterator[HomotopyPath]:
    seen_switches: set[tuple[int, ...]] = set()
    for starts in basepoint_options(d)[:MAX_BASEPOINT_ATTEMPTS]:
        switches = tuple(non_descending_crossings(d, starts))
        if switches in seen_switches:
            continue
        seen_switches.add(switches)
        orders = [switches]
        if len(switches) > 1:
            shuffled = list(switches)
            rng.shuffle(shuffled)
            orders.append(tuple(shuffled))
        for order in orders:
            path, reached = _switching_path(d, order, budget)
            if reached:
                yield path

    for _ in range(MAX_BASEPOINT_ATTEMPTS):
        walk = random_path(d, 2, rng, d.crossing_count + 2, changes=False)
        walked, _ = replay(walk)
        try:
            yield concatenate(walk, descending_path(walked, budget))
        except DescendingPathError:
            logger.debug("path_independence: skipped a walk that did not reach the unlink")


def path_independence_report(
    f: BaseSingularInvariant,
    d: LinkDiagram,
    k: int,
    seed: int,
    base: Mapping[int, RingElem],
    budget: int,
    workers: int = 1,
) -> Report:
    """Integrate ``f`` along ``k`` different paths to the unlink and compare.

    Paths come from different basepoints, shuffled change orders and random
    move walks before the descending path. The paths are integrated on up to
    ``workers`` threads; checks keep the order in which paths were found.

    Raises
    ------
    DescendingPathError
        If fewer than ``k`` distinct paths reach the unlink.
    """
    if k < 2:  # noqa: PLR2004
        msg = f"Path independence needs at least two paths, got {k}"
        raise ValueError(msg)
    rng = random.Random(seed)
    paths: list[HomotopyPath] = []
    seen: set[str] = set()
    for path in _candidate_paths(d, budget, rng):
        key = path.model_dump_json()
        if key in seen:
            continue
        seen.add(key)
        paths.append(path)
        if len(paths) == k:
            break
    if len(paths) < k:
        msg = f"Only {len(paths)} of {k} paths reached the unlink"
        raise DescendingPathError(msg, {"found": len(paths)})

    values = ordered_map(lambda path: _integrate_along(f, path, base), paths, workers)
    checks = tuple(
        Check(
            name=f"path {index}",
            ok=value == values[0],
            detail=f"{len(path.events)} events, value {value}",
        )
        for index, (path, value) in enumerate(zip(paths, values, strict=True))
    )
    witnesses = tuple(
        {"seed": seed, "path": path.model_dump(mode="json"), "value": value.model_dump(mode="json")}
        for path, value in zip(paths, values, strict=True)
    )
    return Report(subject="path-independence", checks=checks, witnesses=witnesses)
