"""Small knot and link table in planar diagram notation."""

import itertools
from collections.abc import Sequence

import networkx as nx

from skein_integrator.diagram import (
    Crossing,
    CrossingKind,
    LinkDiagram,
    PlanarMap,
    SingularDiagram,
    canonical,
    unlink,
)
from skein_integrator.errors import DiagramError

# Lists X(i, j, k, l): i enters under, k leaves under, j and l carry the over-strand.
PD_TABLE: dict[str, tuple[list[list[int]], tuple[CrossingKind, ...] | None]] = {
    "3_1": ([[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]], None),
    "3_1_left": ([[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], None),
    "4_1": ([[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]], None),
    "5_1": ([[2, 8, 3, 7], [4, 10, 5, 9], [6, 2, 7, 1], [8, 4, 9, 3], [10, 6, 1, 5]], None),
    "5_2": ([[1, 5, 2, 4], [3, 9, 4, 8], [5, 1, 6, 10], [7, 3, 8, 2], [9, 7, 10, 6]], None),
    "6_1": (
        [[1, 7, 2, 6], [3, 10, 4, 11], [5, 3, 6, 2], [7, 1, 8, 12], [9, 4, 10, 5], [11, 9, 12, 8]],
        None,
    ),
    "hopf": ([[1, 3, 2, 4], [3, 1, 4, 2]], ("pos", "pos")),
    "hopf_neg": ([[1, 4, 2, 3], [3, 2, 4, 1]], ("neg", "neg")),
    "whitehead": (
        [[6, 1, 7, 2], [10, 7, 5, 8], [4, 5, 1, 6], [2, 10, 3, 9], [8, 4, 9, 3]],
        None,
    ),
}
# Braid words: k is a positive crossing of strands k and k + 1, -k a negative one.
BRAID_TABLE: dict[str, tuple[int, ...]] = {
    "7_1": (1, 1, 1, 1, 1, 1, 1),
    "7_2": (1, 1, 1, 2, -1, 2, 3, -2, 3),
    "7_3": (1, 1, 1, 1, 1, 2, -1, 2),
    "7_4": (1, 1, 2, -1, 2, 2, 3, -2, 3),
    "7_5": (1, 1, 1, 1, 2, -1, 2, 2),
    "7_6": (1, 1, -2, 1, 3, -2, 3),
    "7_7": (1, -2, 1, -2, 3, -2, 3),
    "8_18": (1, -2, 1, -2, 1, -2, 1, -2),
    "8_19": (1, 2, 1, 2, 1, 2, 1, 2),
    "8_20": (1, 1, 1, -2, -1, -1, -1, -2),
    "8_21": (1, 1, 1, 2, -1, -1, 2, 2),
}
CONNECTED_SUMS: dict[str, tuple[str, str]] = {
    "3_1#3_1": ("3_1", "3_1"),
    "3_1#4_1": ("3_1", "4_1"),
    "4_1#4_1": ("4_1", "4_1"),
}
ALIASES = {"trefoil": "3_1", "left_trefoil": "3_1_left", "figure_eight": "4_1"}


def _successors(pd: Sequence[Sequence[int]]) -> dict[int, int]:
    """Successor of each arc under consecutive numbering of every component."""
    graph = nx.Graph()
    for under_in, over_a, under_out, over_b in pd:
        graph.add_edge(under_in, under_out)
        graph.add_edge(over_a, over_b)
    successor = {}
    for group in nx.connected_components(graph):
        low, high = min(group), max(group)
        if sorted(group) != list(range(low, high + 1)):
            msg = f"Arcs {sorted(group)} of one component are not numbered consecutively"
            raise DiagramError(msg, {"arcs": sorted(group)})
        successor.update({label: label + 1 for label in range(low, high)})
        successor[high] = low
    return successor


def _infer_kind(successor: dict[int, int], index: int, ends: Sequence[int]) -> CrossingKind:
    under_in, over_a, under_out, over_b = ends
    if successor[under_in] != under_out:
        msg = f"Crossing {index}: under-strand {under_in} -> {under_out} breaks the numbering"
        raise DiagramError(msg, {"crossing": index})
    forward, backward = successor[over_b] == over_a, successor[over_a] == over_b
    if forward and backward:
        msg = f"Crossing {index}: over-strand direction is ambiguous, pass kinds explicitly"
        raise DiagramError(msg, {"crossing": index})
    if forward:
        return "pos"
    if backward:
        return "neg"
    msg = f"Crossing {index}: over-strand {over_a}, {over_b} breaks the numbering"
    raise DiagramError(msg, {"crossing": index})


def from_pd(
    pd: Sequence[Sequence[int]], kinds: Sequence[CrossingKind] | None = None
) -> LinkDiagram:
    """Build a canonical diagram from a consecutively numbered PD code.

    Crossing signs come from the direction of the over-strand unless ``kinds``
    gives them, which two-arc components need.
    """
    if not pd:
        return unlink(1)
    if kinds is not None and len(kinds) != len(pd):
        msg = f"Got {len(kinds)} kinds for {len(pd)} crossings"
        raise DiagramError(msg)
    successor = _successors(pd)
    crossings = []
    for index, ends in enumerate(pd):
        kind = kinds[index] if kinds is not None else _infer_kind(successor, index, ends)
        crossings.append(Crossing(id=index, kind=kind, ends=(ends[0], ends[1], ends[2], ends[3])))
    labels = sorted(successor)
    component_count = sum(1 for label in labels if successor[label] <= label)
    d = SingularDiagram(components=component_count, crossings=tuple(crossings))
    return canonical(d).as_link()


def from_braid(word: Sequence[int], strands: int | None = None) -> LinkDiagram:
    """Build the closure of a braid word as a canonical diagram.

    Strands run upwards and close up on the right. Generator ``k`` crosses the
    strands at positions ``k`` and ``k + 1`` positively, ``-k`` negatively;
    strands no generator touches become crossingless circles.

    Raises
    ------
    DiagramError
        If a generator is zero or does not fit on ``strands`` strands.
    """
    needed = max((abs(generator) for generator in word), default=0) + 1
    n = needed if strands is None else strands
    if 0 in word or n < needed:
        msg = f"Braid word {list(word)} does not fit on {n} strands"
        raise DiagramError(msg, {"word": list(word), "strands": n})
    if not word:
        return unlink(n)

    labels = itertools.count(n + 1)
    current = list(range(1, n + 1))
    origin = list(range(n))
    raw: list[tuple[CrossingKind, tuple[int, int, int, int]]] = []
    for generator in word:
        i = abs(generator) - 1
        bottom_left, bottom_right = current[i], current[i + 1]
        top_left, top_right = next(labels), next(labels)
        # The strand entering bottom left leaves top right.
        if generator > 0:
            raw.append(("pos", (bottom_right, top_right, top_left, bottom_left)))
        else:
            raw.append(("neg", (bottom_left, bottom_right, top_right, top_left)))
        current[i], current[i + 1] = top_left, top_right
        origin[i], origin[i + 1] = origin[i + 1], origin[i]

    closing = {top: bottom for bottom, top in enumerate(current, start=1)}
    crossings = tuple(
        Crossing(id=index, kind=kind, ends=_renamed(ends, closing))
        for index, (kind, ends) in enumerate(raw)
    )
    cycles = nx.Graph()
    cycles.add_nodes_from(range(n))
    cycles.add_edges_from(enumerate(origin))
    d = SingularDiagram(
        components=nx.number_connected_components(cycles),
        zero_crossing_components=sum(
            1 for bottom, top in enumerate(current, start=1) if top == bottom
        ),
        crossings=crossings,
    )
    return canonical(d).as_link()


def connected_sum(
    first: LinkDiagram, second: LinkDiagram, first_arc: int = 1, second_arc: int = 1
) -> LinkDiagram:
    """Band two diagrams together by exchanging the heads of one arc of each."""
    if not first.crossings:
        return second if first.components == 1 else _with_circles(second, first.components - 1)
    if not second.crossings:
        return first if second.components == 1 else _with_circles(first, second.components - 1)
    offset = max(first.arcs)
    id_offset = max(c.id for c in first.crossings) + 1
    shifted = tuple(
        Crossing(id=c.id + id_offset, kind=c.kind, ends=_shifted(c.ends, offset))
        for c in second.crossings
    )
    merged = SingularDiagram(
        components=first.components + second.components,
        zero_crossing_components=first.zero_crossing_components
        + second.zero_crossing_components,
        crossings=first.crossings + shifted,
    )
    planar_map = PlanarMap.from_diagram(merged)
    heads = planar_map.heads()
    other_arc = second_arc + offset
    if first_arc not in heads or other_arc not in heads:
        msg = f"No arcs {first_arc} and {second_arc} to join"
        raise DiagramError(msg, {"arcs": [first_arc, second_arc]})
    (v1, s1), (v2, s2) = heads[first_arc], heads[other_arc]
    planar_map.vertices[v1].slots[s1] = other_arc
    planar_map.vertices[v2].slots[s2] = first_arc
    return planar_map.to_diagram().as_link()


def _shifted(ends: tuple[int, int, int, int], offset: int) -> tuple[int, int, int, int]:
    e0, e1, e2, e3 = ends
    return (e0 + offset, e1 + offset, e2 + offset, e3 + offset)


def _renamed(
    ends: tuple[int, int, int, int], rename: dict[int, int]
) -> tuple[int, int, int, int]:
    e0, e1, e2, e3 = ends
    return (rename.get(e0, e0), rename.get(e1, e1), rename.get(e2, e2), rename.get(e3, e3))


def _with_circles(d: LinkDiagram, circles: int) -> LinkDiagram:
    return LinkDiagram(
        components=d.components + circles,
        zero_crossing_components=d.zero_crossing_components + circles,
        crossings=d.crossings,
    )


def table_names() -> list[str]:
    """Names accepted by ``table_diagram``."""
    return sorted(["unknot", "unlink_2", *PD_TABLE, *BRAID_TABLE, *CONNECTED_SUMS, *ALIASES])


def table_diagram(name: str) -> LinkDiagram:
    """Return a table diagram by name."""
    name = ALIASES.get(name, name)
    if name == "unknot":
        return unlink(1)
    if name == "unlink_2":
        return unlink(2)
    if name in CONNECTED_SUMS:
        left, right = CONNECTED_SUMS[name]
        return connected_sum(table_diagram(left), table_diagram(right))
    if name in BRAID_TABLE:
        return from_braid(BRAID_TABLE[name])
    if name not in PD_TABLE:
        msg = f"Unknown table diagram {name!r}"
        raise DiagramError(msg, {"known": table_names()})
    pd, kinds = PD_TABLE[name]
    return from_pd(pd, kinds)
