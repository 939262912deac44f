"""Planar diagram codes of oriented links and singular links.

Every crossing lists the four arcs meeting at it counterclockwise. A signed
crossing starts at the incoming under-strand, so the under-strand runs from
position 0 to position 2; the over-strand runs from position 3 to position 1
on a positive crossing and from position 1 to position 3 on a negative one.
A singular crossing starts at the incoming arc whose counterclockwise
neighbour is the other incoming arc, so positions 0 and 1 are incoming and
positions 2 and 3 outgoing.
"""

import itertools
import json
import math
from collections import Counter, defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Literal, Self, assert_never

import networkx as nx
from networkx.utils import UnionFind
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from skein_integrator.errors import CrossingKindError, DiagramError
from skein_integrator.reports import Check, Report

CrossingKind = Literal["pos", "neg", "sing"]
Slot = tuple[int, int]

# Relabelings tried by isomorphism_key before it falls back to the canonical form.
MAX_RELABELINGS = 50_000


class Crossing(BaseModel):
    """A crossing of a planar diagram code."""

    id: int = Field(ge=0)
    kind: CrossingKind
    ends: tuple[int, int, int, int]
    model_config = ConfigDict(frozen=True)

    @property
    def is_singular(self) -> bool:
        """Whether the crossing is a double point."""
        return self.kind == "sing"

    @property
    def sign(self) -> int:
        """Return +1, -1, or 0 for a double point."""
        match self.kind:
            case "pos":
                return 1
            case "neg":
                return -1
            case "sing":
                return 0
            case _ as unexpected_kind:
                assert_never(unexpected_kind)

    def incoming_positions(self) -> tuple[int, int]:
        """Positions of ``ends`` holding incoming arcs."""
        match self.kind:
            case "pos":
                return (0, 3)
            case "neg" | "sing":
                return (0, 1)
            case _ as unexpected_kind:
                assert_never(unexpected_kind)


class SingularDiagram(BaseModel):
    """Planar diagram code of a singular link of any order."""

    format: Literal["pdcode-v1"] = "pdcode-v1"
    components: int = Field(ge=1)
    zero_crossing_components: int = Field(default=0, ge=0)
    crossings: tuple[Crossing, ...] = ()
    model_config = ConfigDict(frozen=True)

    @field_validator("crossings")
    @classmethod
    def _sort_by_id(cls, crossings: tuple[Crossing, ...]) -> tuple[Crossing, ...]:
        return tuple(sorted(crossings, key=lambda crossing: crossing.id))

    @property
    def order(self) -> int:
        """Number of double points."""
        return sum(1 for crossing in self.crossings if crossing.is_singular)

    @property
    def crossing_count(self) -> int:
        """Number of crossings of any kind."""
        return len(self.crossings)

    @property
    def arcs(self) -> tuple[int, ...]:
        """Sorted arc labels."""
        return tuple(sorted({end for c in self.crossings for end in c.ends}))

    def crossing(self, crossing_id: int) -> Crossing:
        """Return the crossing with the given id."""
        for crossing in self.crossings:
            if crossing.id == crossing_id:
                return crossing
        msg = f"No crossing with id {crossing_id}"
        raise CrossingKindError(msg, {"crossing": crossing_id})

    def singular_ids(self) -> tuple[int, ...]:
        """Ids of the double points."""
        return tuple(c.id for c in self.crossings if c.is_singular)

    def to_json(self) -> str:
        """Return the canonical serialization."""
        return self.model_dump_json()

    def as_link(self) -> "LinkDiagram":
        """Coerce a diagram of order 0 to a LinkDiagram."""
        if self.order:
            msg = f"Diagram has {self.order} double points and is not a link"
            raise CrossingKindError(msg, {"double_points": list(self.singular_ids())})
        return LinkDiagram.model_validate(self.model_dump())


class LinkDiagram(SingularDiagram):
    """Planar diagram code of an oriented link."""

    @model_validator(mode="after")
    def _no_double_points(self) -> Self:
        if self.order:
            msg = f"A link diagram cannot contain double points {self.singular_ids()}"
            raise ValueError(msg)
        return self


def unlink(components: int) -> LinkDiagram:
    """Return the crossingless diagram of the unlink."""
    return LinkDiagram(components=components, zero_crossing_components=components)


def serialize(d: SingularDiagram) -> str:
    """Serialize a diagram to canonical JSON."""
    return d.to_json()


def parse_pd(text: str) -> SingularDiagram:
    """Decode a diagram document.

    Parameters
    ----------
    text
        JSON document in the ``pdcode-v1`` format.

    Returns
    -------
    SingularDiagram
        The decoded diagram.

    Raises
    ------
    DiagramError
        If the document is malformed, misses fields, repeats a crossing id or
        uses an arc other than exactly twice.
    """
    try:
        diagram = SingularDiagram.model_validate_json(text)
    except ValidationError as e:
        msg = f"Invalid diagram document: {e}"
        raise DiagramError(msg, {"errors": json.loads(e.json(include_url=False))}) from e

    duplicated = sorted(
        crossing_id
        for crossing_id, count in Counter(c.id for c in diagram.crossings).items()
        if count > 1
    )
    if duplicated:
        msg = f"Duplicate crossing id {duplicated[0]}"
        raise DiagramError(msg, {"crossing": duplicated[0]})

    for label, count in sorted(_label_counts(diagram).items()):
        if count != 2:  # noqa: PLR2004
            msg = f"Unpaired arc {label}: used {count} times"
            raise DiagramError(msg, {"arc": label, "uses": count})
    return diagram


def _label_counts(d: SingularDiagram) -> Counter[int]:
    return Counter(end for crossing in d.crossings for end in crossing.ends)


def _orientation_problems(d: SingularDiagram) -> list[str]:
    roles: dict[int, list[bool]] = defaultdict(list)
    for crossing in d.crossings:
        incoming = crossing.incoming_positions()
        for position, label in enumerate(crossing.ends):
            roles[label].append(position in incoming)
    return [
        f"arc {label} is {'incoming' if flags[0] else 'outgoing'} at both ends"
        for label, flags in sorted(roles.items())
        if len(flags) == 2 and flags[0] == flags[1]  # noqa: PLR2004
    ]


def validate(d: SingularDiagram) -> Report:
    """Check the structural consistency of a diagram.

    Failures are reported as failed checks rather than raised.
    """
    counts = _label_counts(d)
    unpaired = sorted(label for label, count in counts.items() if count != 2)  # noqa: PLR2004
    id_counts = Counter(c.id for c in d.crossings)
    duplicated = sorted(crossing_id for crossing_id, n in id_counts.items() if n > 1)
    orientation = _orientation_problems(d)

    checks = [
        Check(
            name="arc_pairing",
            ok=not unpaired,
            detail=f"unpaired arcs {unpaired}" if unpaired else "",
        ),
        Check(
            name="crossing_ids",
            ok=not duplicated,
            detail=f"duplicate ids {duplicated}" if duplicated else "",
        ),
        Check(name="orientation", ok=not orientation, detail="; ".join(orientation)),
    ]
    if unpaired or duplicated or orientation:
        return Report(subject="diagram", checks=tuple(checks))

    planar_map = PlanarMap.from_diagram(d)
    cycles = planar_map.cycles()
    expected_labels = list(range(1, len(counts) + 1))
    broken = [cycle for cycle in cycles if not _consecutive(cycle)]
    checks.append(
        Check(
            name="succession",
            ok=sorted(counts) == expected_labels and not broken,
            detail=f"non-consecutive components {broken}" if broken else "",
        )
    )
    declared = d.components
    found = len(cycles) + d.zero_crossing_components
    checks.append(
        Check(
            name="components",
            ok=declared == found,
            detail="" if declared == found else f"declared {declared}, found {found}",
        )
    )
    return Report(subject="diagram", checks=tuple(checks))


def _consecutive(cycle: list[int]) -> bool:
    low, high = min(cycle), max(cycle)
    if high - low + 1 != len(cycle):
        return False
    return all(
        following == (label + 1 if label < high else low)
        for label, following in itertools.pairwise([*cycle, cycle[0]])
    )


def components(d: SingularDiagram) -> int:
    """Return the number of circles of the diagram."""
    return len(PlanarMap.from_diagram(d).cycles()) + d.zero_crossing_components


def writhe(d: SingularDiagram) -> int:
    """Return the sum of the crossing signs."""
    if d.order:
        msg = "Writhe is undefined on a diagram with double points"
        raise CrossingKindError(msg, {"double_points": list(d.singular_ids())})
    return sum(crossing.sign for crossing in d.crossings)


def planarity_genus(d: SingularDiagram) -> int:
    """Return the genus of the surface carrying the diagram's rotation system."""
    planar_map = PlanarMap.from_diagram(d)
    if not planar_map.vertices:
        return 0
    graph = nx.MultiGraph()
    graph.add_nodes_from(planar_map.vertices)
    heads = planar_map.heads()
    graph.add_edges_from(
        (tail[0], heads[label][0]) for label, tail in planar_map.tails().items()
    )
    # Every crossing has four ends, so E = 2V and V - E + F = F - V.
    euler = len(planar_map.faces()) - len(planar_map.vertices)
    return (2 * nx.number_connected_components(graph) - euler) // 2


def canonical(d: SingularDiagram) -> SingularDiagram:
    """Return the diagram with canonical arc labels and crossing ids."""
    return PlanarMap.from_diagram(d).to_diagram()


def isomorphism_key(d: SingularDiagram) -> str:
    """Return a string shared exactly by combinatorially isomorphic diagrams."""
    return PlanarMap.from_diagram(d).isomorphism_key()


def arc_cycles(d: SingularDiagram) -> list[list[int]]:
    """Return the arcs of each component in traversal order."""
    return PlanarMap.from_diagram(d).cycles()


@dataclass(frozen=True)
class Passage:
    """One pass of a component through a crossing."""

    crossing: int
    arc_in: int
    arc_out: int
    over: bool | None
    sign: int


def gauss_sequence(d: SingularDiagram, start_arc: int) -> list[Passage]:
    """Return the passages of the component of ``start_arc``, starting at its head."""
    planar_map = PlanarMap.from_diagram(d)
    heads = planar_map.heads()
    passages = []
    label = start_arc
    while True:
        vertex_id, slot = heads[label]
        vertex = planar_map.vertices[vertex_id]
        out = vertex.slots[(slot + 2) % 4]
        passages.append(
            Passage(
                crossing=vertex_id,
                arc_in=label,
                arc_out=out,
                over=vertex.is_over(slot),
                sign=vertex.sign(),
            )
        )
        label = out
        if label == start_arc:
            return passages


def non_descending_crossings(d: SingularDiagram, starts: tuple[int, ...]) -> list[int]:
    """Crossings first met from below when walking the components from ``starts``.

    Components are walked in the order of ``starts``, each from the head of its
    start arc. Switching the returned crossings makes the diagram descending.
    """
    seen: set[int] = set()
    switches = []
    for start in starts:
        for passage in gauss_sequence(d, start):
            if passage.crossing in seen:
                continue
            seen.add(passage.crossing)
            if passage.over is False:
                switches.append(passage.crossing)
    return switches


def basepoint_options(d: SingularDiagram) -> list[tuple[int, ...]]:
    """Every component order with a start arc per component.

    Options are sorted by the number of crossings to switch, then by starts.
    """
    cycles = PlanarMap.from_diagram(d).cycles()
    options = [
        starts
        for ordering in itertools.permutations(cycles)
        for starts in itertools.product(*ordering)
    ]
    return sorted(options, key=lambda starts: (len(non_descending_crossings(d, starts)), starts))


@dataclass
class Vertex:
    """A crossing of a PlanarMap."""

    slots: list[int]
    incoming: list[bool]
    # Slot of the incoming under-strand; None at a double point.
    under: int | None

    def leading_slot(self) -> int:
        """Slot serialized at position 0."""
        if self.under is not None:
            return self.under
        return next(i for i in range(4) if self.incoming[i] and self.incoming[(i + 1) % 4])

    def kind(self) -> CrossingKind:
        """Crossing kind derived from the geometry."""
        if self.under is None:
            return "sing"
        over_in = next(i for i in range(4) if self.incoming[i] and i != self.under)
        return "pos" if (over_in - self.under) % 4 == 3 else "neg"  # noqa: PLR2004

    def sign(self) -> int:
        """Return +1, -1 or 0."""
        return {"pos": 1, "neg": -1, "sing": 0}[self.kind()]

    def is_over(self, slot: int) -> bool | None:
        """Whether the strand through ``slot`` is the over-strand."""
        if self.under is None:
            return None
        return slot % 2 != self.under % 2


@dataclass
class PlanarMap:
    """Mutable rotation system with orientation that moves rewrite in place.

    Vertices are keyed by crossing id. ``to_diagram`` renumbers arcs and
    crossings canonically.
    """

    vertices: dict[int, Vertex]
    zero_components: int = 0
    _issued_label: int = field(default=0, repr=False)
    _issued_vertex: int = field(default=-1, repr=False)

    @classmethod
    def from_diagram(cls, d: SingularDiagram) -> "PlanarMap":
        """Build the working map of a diagram."""
        problems = _orientation_problems(d)
        unpaired = sorted(label for label, n in _label_counts(d).items() if n != 2)  # noqa: PLR2004
        if unpaired:
            problems.insert(0, f"unpaired arcs {unpaired}")
        if problems:
            msg = f"Inconsistent diagram: {problems[0]}"
            raise DiagramError(msg, {"problems": problems})
        vertices = {
            crossing.id: Vertex(
                slots=list(crossing.ends),
                incoming=[p in crossing.incoming_positions() for p in range(4)],
                under=None if crossing.is_singular else 0,
            )
            for crossing in d.crossings
        }
        return cls(vertices=vertices, zero_components=d.zero_crossing_components)

    def copy(self) -> "PlanarMap":
        """Return an independent copy."""
        return PlanarMap(
            vertices={
                vid: Vertex(list(v.slots), list(v.incoming), v.under)
                for vid, v in self.vertices.items()
            },
            zero_components=self.zero_components,
            _issued_label=self._issued_label,
            _issued_vertex=self._issued_vertex,
        )

    def labels(self) -> set[int]:
        """All arc labels in use."""
        return {label for v in self.vertices.values() for label in v.slots}

    def heads(self) -> dict[int, Slot]:
        """Map each arc to the slot where it enters a crossing."""
        return {
            label: (vid, i)
            for vid, v in self.vertices.items()
            for i, label in enumerate(v.slots)
            if v.incoming[i]
        }

    def tails(self) -> dict[int, Slot]:
        """Map each arc to the slot where it leaves a crossing."""
        return {
            label: (vid, i)
            for vid, v in self.vertices.items()
            for i, label in enumerate(v.slots)
            if not v.incoming[i]
        }

    def successor(self) -> dict[int, int]:
        """Arc-succession map."""
        return {
            label: self.vertices[vid].slots[(slot + 2) % 4]
            for label, (vid, slot) in self.heads().items()
        }

    def cycles(self) -> list[list[int]]:
        """Components as arc lists, ordered by lowest label and starting there."""
        successor = self.successor()
        seen: set[int] = set()
        cycles = []
        for label in sorted(successor):
            if label in seen:
                continue
            cycle = [label]
            seen.add(label)
            following = successor[label]
            while following != label:
                cycle.append(following)
                seen.add(following)
                following = successor[following]
            cycles.append(cycle)
        return cycles

    def faces(self) -> list[list[Slot]]:
        """Faces as orbits of darts.

        The dart at slot ``(v, i)`` runs along the arc in slot ``i`` away from
        ``v``; the face it traces lies on its right. The right side of an arc
        is the face of its tail slot, the left side the face of its head slot.
        """
        occurrences: dict[int, list[Slot]] = defaultdict(list)
        for vid, vertex in self.vertices.items():
            for i, label in enumerate(vertex.slots):
                occurrences[label].append((vid, i))
        other: dict[Slot, Slot] = {}
        for first, second in occurrences.values():
            other[first] = second
            other[second] = first

        seen: set[Slot] = set()
        faces = []
        for dart in sorted(other):
            face = []
            current = dart
            while current not in seen:
                seen.add(current)
                face.append(current)
                vid, slot = other[current]
                current = (vid, (slot + 1) % 4)
            if face:
                faces.append(face)
        return faces

    def fresh_label(self) -> int:
        """Return an arc label not used before."""
        self._issued_label = max(self._issued_label, *self.labels(), 0) + 1
        return self._issued_label

    def fresh_vertex_id(self) -> int:
        """Return a vertex key not used before."""
        self._issued_vertex = max(self._issued_vertex, *self.vertices, -1) + 1
        return self._issued_vertex

    def split_arc(self, label: int, pieces: int) -> list[int]:
        """Cut an arc into pieces along its orientation.

        The first piece keeps the label and the tail; the last piece takes over
        the head slot. The caller places the cut points at new vertices.
        """
        new_labels = [label] + [self.fresh_label() for _ in range(pieces - 1)]
        vid, slot = self.heads()[label]
        self.vertices[vid].slots[slot] = new_labels[-1]
        return new_labels

    def take_circle(self, pieces: int) -> list[int]:
        """Consume a crossingless component and return fresh labels for it."""
        if self.zero_components < 1:
            msg = "No crossingless component available"
            raise DiagramError(msg)
        self.zero_components -= 1
        return [self.fresh_label() for _ in range(pieces)]

    def add_vertex(self, slots: Iterable[int], incoming: Iterable[bool], under: int | None) -> int:
        """Insert a vertex and return its key."""
        vid = self.fresh_vertex_id()
        self.vertices[vid] = Vertex(list(slots), list(incoming), under)
        return vid

    def passage_joins(self, vid: int) -> list[tuple[int, int]]:
        """Pairs (incoming, outgoing) of the two strands through a vertex."""
        vertex = self.vertices[vid]
        return [
            (vertex.slots[i], vertex.slots[(i + 2) % 4])
            for i in range(4)
            if vertex.incoming[i]
        ]

    def remove_vertices(self, vertex_ids: Iterable[int], joins: Iterable[tuple[int, int]]) -> None:
        """Delete vertices, joining each incoming arc to its paired outgoing arc.

        A merged arc keeps the label of its first piece. Merged arcs that close
        up without touching a remaining vertex become crossingless components.
        """
        removed = set(vertex_ids)
        tails = self.tails()
        touched = {label for vid in removed for label in self.vertices[vid].slots}
        pieces: UnionFind = UnionFind(touched)
        for incoming, outgoing in joins:
            pieces.union(incoming, outgoing)
        for vid in removed:
            del self.vertices[vid]

        rename = {}
        for group in pieces.to_sets():
            first = [label for label in group if tails[label][0] not in removed]
            if not first:
                self.zero_components += 1
                continue
            for label in group:
                rename[label] = first[0]
        for vertex in self.vertices.values():
            vertex.slots = [rename.get(label, label) for label in vertex.slots]

    def to_diagram(self) -> SingularDiagram:
        """Return the canonically relabeled diagram."""
        return self.relabeled()[0]

    def relabeled(self) -> tuple[SingularDiagram, dict[int, int]]:
        """Return the canonical diagram and the map from vertex keys to crossing ids."""
        cycles = self.cycles()
        relabel = {
            label: index
            for index, label in enumerate(itertools.chain.from_iterable(cycles), start=1)
        }
        ids = self._rank_vertices(relabel)
        crossings = tuple(
            self._crossing(vid, ids[vid], relabel) for vid in self.vertices
        )
        diagram = SingularDiagram(
            components=len(cycles) + self.zero_components,
            zero_crossing_components=self.zero_components,
            crossings=crossings,
        )
        return diagram, ids

    def isomorphism_key(self) -> str:
        """Minimum serialization over orientation-respecting relabelings."""
        cycles = self.cycles()
        combinations = math.factorial(len(cycles)) * math.prod(
            len(cycle) for cycle in cycles
        )
        if combinations > MAX_RELABELINGS:
            return self.to_diagram().to_json()

        best: tuple[tuple[str, tuple[int, ...]], ...] | None = None
        for ordering in itertools.permutations(cycles):
            for starts in itertools.product(*(range(len(cycle)) for cycle in ordering)):
                labels = itertools.chain.from_iterable(
                    cycle[start:] + cycle[:start]
                    for cycle, start in zip(ordering, starts, strict=True)
                )
                relabel = {label: index for index, label in enumerate(labels, start=1)}
                signature = self._signature(relabel)
                if best is None or signature < best:
                    best = signature
        return json.dumps(
            [len(cycles), self.zero_components, best or []], separators=(",", ":")
        )

    def _signature(self, relabel: dict[int, int]) -> tuple[tuple[str, tuple[int, ...]], ...]:
        ids = self._rank_vertices(relabel)
        crossings = sorted(
            (self._crossing(vid, ids[vid], relabel) for vid in self.vertices),
            key=lambda crossing: crossing.id,
        )
        return tuple((crossing.kind, crossing.ends) for crossing in crossings)

    def _rank_vertices(self, relabel: dict[int, int]) -> dict[int, int]:
        def lowest_incoming(vid: int) -> int:
            vertex = self.vertices[vid]
            return min(relabel[label] for i, label in enumerate(vertex.slots) if vertex.incoming[i])

        return {vid: rank for rank, vid in enumerate(sorted(self.vertices, key=lowest_incoming))}

    def _crossing(self, vid: int, crossing_id: int, relabel: dict[int, int]) -> Crossing:
        vertex = self.vertices[vid]
        labels = [relabel[label] for label in vertex.slots]
        start = vertex.leading_slot()
        ends = labels[start:] + labels[:start]
        return Crossing(id=crossing_id, kind=vertex.kind(), ends=(ends[0], ends[1], ends[2], ends[3]))