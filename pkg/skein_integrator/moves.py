"""Reidemeister moves, rigid-vertex slides, resolutions and bounded searches.

Move locations:

- ``R1_add_pos`` / ``R1_add_neg``: ``(arc, side)``; ``side`` picks one of the two
  mirror placements of the curl, arc ``-1`` is a crossingless circle.
- ``R1_remove``: ``(crossing,)``.
- ``R2_add``: ``(over_arc, over_side, under_arc, under_side)``; a side is 0 for
  the face on the left of the arc and 1 for the face on its right; arcs ``-1``
  and ``-2`` are the first and second crossingless circles.
- ``R2_remove``: the two arcs bounding the bigon.
- ``R3``, ``S_slide_over``, ``S_slide_under``: the three arcs bounding the
  triangle.
"""

import itertools
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Literal, assert_never

from logzero import logger
from pydantic import BaseModel, ConfigDict

from skein_integrator.diagram import (
    Crossing,
    LinkDiagram,
    PlanarMap,
    SingularDiagram,
    isomorphism_key,
)
from skein_integrator.errors import CrossingCapExceededError, CrossingKindError, MovePatternError
from skein_integrator.workers import ordered_map

MoveKind = Literal[
    "R1_add_pos",
    "R1_add_neg",
    "R1_remove",
    "R2_add",
    "R2_remove",
    "R3",
    "S_slide_over",
    "S_slide_under",
]
ResolutionSign = Literal["plus", "minus", "zero"]
Verdict = Literal["yes", "no", "unknown"]

CIRCLE = -1
SECOND_CIRCLE = -2
LEFT = 0
RIGHT = 1
EAST, NORTH, WEST, SOUTH = range(4)

REDUCING_KINDS: frozenset[MoveKind] = frozenset(
    {"R1_remove", "R2_remove", "R3", "S_slide_over", "S_slide_under"}
)
INVERSE_KINDS: dict[MoveKind, frozenset[MoveKind]] = {
    "R1_add_pos": frozenset({"R1_remove"}),
    "R1_add_neg": frozenset({"R1_remove"}),
    "R1_remove": frozenset({"R1_add_pos", "R1_add_neg"}),
    "R2_add": frozenset({"R2_remove"}),
    "R2_remove": frozenset({"R2_add"}),
    "R3": frozenset({"R3"}),
    "S_slide_over": frozenset({"S_slide_over"}),
    "S_slide_under": frozenset({"S_slide_under"}),
}
CROSSING_DELTA: dict[MoveKind, int] = {
    "R1_add_pos": 1,
    "R1_add_neg": 1,
    "R1_remove": -1,
    "R2_add": 2,
    "R2_remove": -2,
    "R3": 0,
    "S_slide_over": 0,
    "S_slide_under": 0,
}


class MoveSite(BaseModel):
    """A move kind together with the location of its local pattern."""

    kind: MoveKind
    location: tuple[int, ...]
    model_config = ConfigDict(frozen=True)

    def sort_key(self) -> tuple[str, tuple[int, ...]]:
        """Key ordering sites by kind then location."""
        return (self.kind, self.location)


@dataclass(frozen=True)
class MoveResult:
    """Diagram produced by a move with the fate of the crossing ids."""

    diagram: SingularDiagram
    # Old crossing id to new crossing id, for crossings the move kept.
    id_map: dict[int, int]
    # New ids of the crossings the move created.
    created: tuple[int, ...]


class SimplifyResult(BaseModel):
    """Outcome of simplify with the moves that produced it."""

    diagram: SingularDiagram
    witness: tuple[MoveSite, ...]
    nodes: int
    model_config = ConfigDict(frozen=True)


class EquivalenceReport(BaseModel):
    """Outcome of a bounded equivalence check."""

    verdict: Verdict
    reason: str
    witness_from_first: tuple[MoveSite, ...] = ()
    witness_from_second: tuple[MoveSite, ...] = ()
    model_config = ConfigDict(frozen=True)


def _replace_crossing(d: SingularDiagram, crossing: Crossing) -> SingularDiagram:
    return SingularDiagram(
        components=d.components,
        zero_crossing_components=d.zero_crossing_components,
        crossings=tuple(crossing if c.id == crossing.id else c for c in d.crossings),
    )


def make_singular(d: SingularDiagram, c: int) -> SingularDiagram:
    """Turn a signed crossing into a double point without renumbering."""
    crossing = d.crossing(c)
    if crossing.is_singular:
        msg = f"Crossing {c} is already singular"
        raise CrossingKindError(msg, {"crossing": c})
    e = crossing.ends
    ends = (e[3], e[0], e[1], e[2]) if crossing.kind == "pos" else e
    return _replace_crossing(d, Crossing(id=c, kind="sing", ends=ends))


def resolve(d: SingularDiagram, p: int, s: ResolutionSign) -> SingularDiagram:
    """Resolve a double point.

    ``plus`` puts the strand entering at position 0 over the other one, ``minus``
    puts it under, ``zero`` replaces the double point by the oriented smoothing
    and renumbers the diagram.
    """
    crossing = d.crossing(p)
    if not crossing.is_singular:
        msg = f"Crossing {p} is not a double point"
        raise CrossingKindError(msg, {"crossing": p})
    e = crossing.ends
    match s:
        case "plus":
            return _replace_crossing(d, Crossing(id=p, kind="pos", ends=(e[1], e[2], e[3], e[0])))
        case "minus":
            return _replace_crossing(d, Crossing(id=p, kind="neg", ends=e))
        case "zero":
            planar_map = PlanarMap.from_diagram(d)
            planar_map.remove_vertices([p], [(e[0], e[3]), (e[1], e[2])])
            return planar_map.to_diagram()
        case _ as unexpected_sign:
            assert_never(unexpected_sign)


def crossing_change(d: SingularDiagram, c: int) -> tuple[LinkDiagram, SingularDiagram]:
    """Switch a crossing, returning the new link and the double point passed through."""
    crossing = d.crossing(c)
    if crossing.is_singular:
        msg = f"Crossing {c} is singular and cannot be switched"
        raise CrossingKindError(msg, {"crossing": c})
    singular = make_singular(d, c)
    flipped = resolve(singular, c, "minus" if crossing.kind == "pos" else "plus")
    return flipped.as_link(), singular


def apply_move(d: SingularDiagram, site: MoveSite) -> SingularDiagram:
    """Apply a move and return the canonically renumbered diagram."""
    return apply_move_tracked(d, site).diagram


def apply_move_tracked(d: SingularDiagram, site: MoveSite) -> MoveResult:
    """Apply a move and report how crossing ids were renumbered."""
    planar_map = PlanarMap.from_diagram(d)
    before = set(planar_map.vertices)
    match site.kind:
        case "R1_add_pos":
            _add_curl(planar_map, site.location, positive=True)
        case "R1_add_neg":
            _add_curl(planar_map, site.location, positive=False)
        case "R1_remove":
            _remove_curl(planar_map, site.location)
        case "R2_add":
            _add_bigon(planar_map, site.location)
        case "R2_remove":
            _remove_bigon(planar_map, site.location)
        case "R3" | "S_slide_over" | "S_slide_under":
            _slide(planar_map, site)
        case _ as unexpected_kind:
            assert_never(unexpected_kind)
    diagram, ids = planar_map.relabeled()
    return MoveResult(
        diagram=diagram,
        id_map={old: ids[old] for old in before if old in ids},
        created=tuple(ids[key] for key in ids if key not in before),
    )


def _mismatch(kind: str, location: tuple[int, ...], reason: str) -> MovePatternError:
    msg = f"{kind} does not apply at {location}: {reason}"
    return MovePatternError(msg, {"kind": kind, "location": list(location)})


def _add_curl(planar_map: PlanarMap, location: tuple[int, ...], *, positive: bool) -> None:
    kind = "R1_add_pos" if positive else "R1_add_neg"
    if len(location) != 2 or location[1] not in (LEFT, RIGHT):  # noqa: PLR2004
        raise _mismatch(kind, location, "expected (arc, side)")
    arc, side = location
    if arc == CIRCLE:
        first, loop = planar_map.take_circle(2)
        last = first
    elif arc in planar_map.labels():
        first, loop, last = planar_map.split_arc(arc, 3)
    else:
        raise _mismatch(kind, location, f"no arc {arc}")

    match side, positive:
        case 0, True:
            slots, incoming = [loop, loop, last, first], [True, False, False, True]
        case 0, False:
            slots, incoming = [first, loop, loop, last], [True, True, False, False]
        case 1, True:
            slots, incoming = [first, last, loop, loop], [True, False, False, True]
        case _:
            slots, incoming = [loop, first, last, loop], [True, True, False, False]
    planar_map.add_vertex(slots, incoming, under=0)


def _has_loop(slots: list[int] | tuple[int, ...]) -> bool:
    return any(slots[i] == slots[(i + 1) % 4] for i in range(4))


def _remove_curl(planar_map: PlanarMap, location: tuple[int, ...]) -> None:
    if len(location) != 1:
        raise _mismatch("R1_remove", location, "expected (crossing,)")
    (vid,) = location
    vertex = planar_map.vertices.get(vid)
    if vertex is None or vertex.under is None or not _has_loop(vertex.slots):
        raise _mismatch("R1_remove", location, "no curl at this crossing")
    planar_map.remove_vertices([vid], planar_map.passage_joins(vid))


def _face_sides(planar_map: PlanarMap) -> list[list[tuple[int, int]]]:
    tails = planar_map.tails()
    return [
        [
            (
                planar_map.vertices[vid].slots[slot],
                RIGHT if tails[planar_map.vertices[vid].slots[slot]] == (vid, slot) else LEFT,
            )
            for vid, slot in face
        ]
        for face in planar_map.faces()
    ]


def _strand_pieces(planar_map: PlanarMap, arc: int) -> tuple[int, int, int]:
    if arc in (CIRCLE, SECOND_CIRCLE):
        first, middle = planar_map.take_circle(2)
        return first, middle, first
    first, middle, last = planar_map.split_arc(arc, 3)
    return first, middle, last


def _add_bigon(planar_map: PlanarMap, location: tuple[int, ...]) -> None:
    if len(location) != 4:  # noqa: PLR2004
        raise _mismatch("R2_add", location, "expected (over, side, under, side)")
    over, over_side, under, under_side = location
    if over_side not in (LEFT, RIGHT) or under_side not in (LEFT, RIGHT):
        raise _mismatch("R2_add", location, "sides must be 0 or 1")
    labels = planar_map.labels()
    for arc in (over, under):
        if arc not in labels and arc not in (CIRCLE, SECOND_CIRCLE):
            raise _mismatch("R2_add", location, f"no arc {arc}")
    if over == SECOND_CIRCLE or (under == SECOND_CIRCLE and over != CIRCLE):
        raise _mismatch("R2_add", location, "the second circle pairs with the first")
    circles_needed = len({arc for arc in (over, under) if arc < 0})
    if planar_map.zero_components < circles_needed:
        raise _mismatch("R2_add", location, "not enough crossingless components")
    if over > 0 and under > 0:
        if over == under:
            raise _mismatch("R2_add", location, "needs two distinct arcs")
        face_of = {
            side: index
            for index, sides in enumerate(_face_sides(planar_map))
            for side in sides
        }
        if face_of[(over, over_side)] != face_of[(under, under_side)]:
            raise _mismatch("R2_add", location, "arcs do not share the face")

    if over == CIRCLE and under == CIRCLE:
        first, over_middle, last, under_middle = planar_map.take_circle(4)
        over_pieces = (first, over_middle, last)
        under_pieces = (last, under_middle, first)
        over_side = under_side = LEFT
    else:
        over_pieces = _strand_pieces(planar_map, over)
        under_pieces = _strand_pieces(planar_map, under)

    for slots, incoming, under_slot in _bigon_vertices(
        over_pieces, under_pieces, over_side, under_side
    ):
        planar_map.add_vertex(slots, incoming, under_slot)


def _bigon_vertices(
    over_pieces: tuple[int, int, int],
    under_pieces: tuple[int, int, int],
    over_side: int,
    under_side: int,
) -> list[tuple[list[int], list[bool], int]]:
    """Two crossings of a finger of the over-strand pushed across the under-strand.

    Picture the face as a horizontal band: the over-strand along its top edge
    dips down through the left (L) and right (R) crossings, the under-strand
    runs along its bottom edge.
    """
    left, right = [0] * 4, [0] * 4
    left_in, right_in = [False] * 4, [False] * 4
    a_in, a_mid, a_out = over_pieces
    b_in, b_mid, b_out = under_pieces

    def put(slots: list[int], flags: list[bool], slot: int, label: int, *, incoming: bool) -> None:
        slots[slot] = label
        flags[slot] = incoming

    if over_side == RIGHT:
        put(left, left_in, NORTH, a_in, incoming=True)
        put(left, left_in, SOUTH, a_mid, incoming=False)
        put(right, right_in, SOUTH, a_mid, incoming=True)
        put(right, right_in, NORTH, a_out, incoming=False)
    else:
        put(right, right_in, NORTH, a_in, incoming=True)
        put(right, right_in, SOUTH, a_mid, incoming=False)
        put(left, left_in, SOUTH, a_mid, incoming=True)
        put(left, left_in, NORTH, a_out, incoming=False)

    if under_side == LEFT:
        put(left, left_in, WEST, b_in, incoming=True)
        put(left, left_in, EAST, b_mid, incoming=False)
        put(right, right_in, WEST, b_mid, incoming=True)
        put(right, right_in, EAST, b_out, incoming=False)
        under_slot = WEST
    else:
        put(right, right_in, EAST, b_in, incoming=True)
        put(right, right_in, WEST, b_mid, incoming=False)
        put(left, left_in, EAST, b_mid, incoming=True)
        put(left, left_in, WEST, b_out, incoming=False)
        under_slot = EAST
    return [(left, left_in, under_slot), (right, right_in, under_slot)]


def _bigon_crossings(planar_map: PlanarMap, p: int, q: int) -> tuple[int, int] | None:
    """Crossings of an R2 bigon bounded by arcs p and q, or None."""
    tails, heads = planar_map.tails(), planar_map.heads()
    if p == q or p not in tails or q not in tails:
        return None
    ends = {tails[p][0], heads[p][0]}
    if len(ends) != 2 or ends != {tails[q][0], heads[q][0]}:  # noqa: PLR2004
        return None
    first, second = sorted(ends)
    if planar_map.vertices[first].under is None or planar_map.vertices[second].under is None:
        return None
    if not any(
        len(sides) == 2 and {label for label, _ in sides} == {p, q}  # noqa: PLR2004
        for sides in _face_sides(planar_map)
    ):
        return None
    tail_vid, tail_slot = tails[p]
    head_vid, head_slot = heads[p]
    if planar_map.vertices[tail_vid].is_over(tail_slot) != planar_map.vertices[
        head_vid
    ].is_over(head_slot):
        return None
    return first, second


def _remove_bigon(planar_map: PlanarMap, location: tuple[int, ...]) -> None:
    if len(location) != 2:  # noqa: PLR2004
        raise _mismatch("R2_remove", location, "expected (arc, arc)")
    crossings = _bigon_crossings(planar_map, *location)
    if crossings is None:
        raise _mismatch("R2_remove", location, "arcs do not bound a removable bigon")
    joins = [join for vid in crossings for join in planar_map.passage_joins(vid)]
    planar_map.remove_vertices(crossings, joins)


def _triangle_kind(planar_map: PlanarMap, arcs: Iterable[int]) -> MoveKind | None:
    """Which slide applies to the triangle bounded by ``arcs``, if any."""
    arc_set = set(arcs)
    if len(arc_set) != 3 or not any(  # noqa: PLR2004
        len(sides) == 3 and {label for label, _ in sides} == arc_set  # noqa: PLR2004
        for sides in _face_sides(planar_map)
    ):
        return None
    tails, heads = planar_map.tails(), planar_map.heads()
    corners = {tails[m][0] for m in arc_set}
    if len(corners) != 3:  # noqa: PLR2004
        return None
    status = {
        m: (
            planar_map.vertices[tails[m][0]].is_over(tails[m][1]),
            planar_map.vertices[heads[m][0]].is_over(heads[m][1]),
        )
        for m in arc_set
    }
    singular = [vid for vid in corners if planar_map.vertices[vid].under is None]
    if not singular:
        return "R3" if (True, True) in status.values() else None
    if len(singular) > 1:
        return None
    (opposite,) = (m for m in arc_set if singular[0] not in (tails[m][0], heads[m][0]))
    match status[opposite]:
        case (True, True):
            return "S_slide_over"
        case (False, False):
            return "S_slide_under"
        case _:
            return None


def _slide(planar_map: PlanarMap, site: MoveSite) -> None:
    if _triangle_kind(planar_map, site.location) != site.kind:
        raise _mismatch(site.kind, site.location, "triangle does not admit this slide")
    tails, heads = planar_map.tails(), planar_map.heads()
    snapshot = {vid: list(v.slots) for vid, v in planar_map.vertices.items()}
    for m in site.location:
        tail_vid, out_slot = tails[m]
        head_vid, in_slot = heads[m]
        before = snapshot[tail_vid][(out_slot + 2) % 4]
        after = snapshot[head_vid][(in_slot + 2) % 4]
        planar_map.vertices[tail_vid].slots[(out_slot + 2) % 4] = m
        planar_map.vertices[tail_vid].slots[out_slot] = after
        planar_map.vertices[head_vid].slots[in_slot] = before
        planar_map.vertices[head_vid].slots[(in_slot + 2) % 4] = m


def _sites(planar_map: PlanarMap, kinds: frozenset[MoveKind]) -> set[MoveSite]:
    sites: set[MoveSite] = set()
    labels = sorted(planar_map.labels())
    curl_kinds: tuple[MoveKind, ...] = ("R1_add_pos", "R1_add_neg")
    for curl in curl_kinds:
        if curl not in kinds:
            continue
        sites.update(
            MoveSite(kind=curl, location=(label, side))
            for label in labels
            for side in (LEFT, RIGHT)
        )
        if planar_map.zero_components:
            sites.add(MoveSite(kind=curl, location=(CIRCLE, LEFT)))

    if "R1_remove" in kinds:
        sites.update(
            MoveSite(kind="R1_remove", location=(vid,))
            for vid, vertex in planar_map.vertices.items()
            if vertex.under is not None and _has_loop(vertex.slots)
        )

    face_sides = _face_sides(planar_map)
    if "R2_add" in kinds:
        for sides in face_sides:
            sites.update(
                MoveSite(kind="R2_add", location=(x, x_side, y, y_side))
                for (x, x_side), (y, y_side) in itertools.permutations(sides, 2)
                if x != y
            )
        if planar_map.zero_components:
            for sides in face_sides:
                for y, y_side in sides:
                    sites.add(MoveSite(kind="R2_add", location=(CIRCLE, LEFT, y, y_side)))
                    sites.add(MoveSite(kind="R2_add", location=(y, y_side, CIRCLE, LEFT)))
            sites.add(MoveSite(kind="R2_add", location=(CIRCLE, LEFT, CIRCLE, LEFT)))
        if planar_map.zero_components >= 2:  # noqa: PLR2004
            sites.add(MoveSite(kind="R2_add", location=(CIRCLE, LEFT, SECOND_CIRCLE, LEFT)))

    for sides in face_sides:
        arcs = tuple(sorted({label for label, _ in sides}))
        if len(sides) == 2 and "R2_remove" in kinds:  # noqa: PLR2004
            if _bigon_crossings(planar_map, *arcs) is not None:
                sites.add(MoveSite(kind="R2_remove", location=arcs))
        elif len(sides) == 3:  # noqa: PLR2004
            slide = _triangle_kind(planar_map, arcs)
            if slide is not None and slide in kinds:
                sites.add(MoveSite(kind=slide, location=arcs))
    return sites


def enumerate_move_sites(
    d: SingularDiagram, kinds: Iterable[MoveKind] | None = None
) -> list[MoveSite]:
    """List every applicable move site, sorted by kind then location."""
    wanted = frozenset(kinds) if kinds is not None else frozenset(CROSSING_DELTA)
    return sorted(_sites(PlanarMap.from_diagram(d), wanted), key=MoveSite.sort_key)


def inverse_site(d: SingularDiagram, site: MoveSite) -> MoveSite | None:
    """Return the site on the moved diagram that restores ``d`` exactly."""
    moved = apply_move(d, site)
    target = d.to_json()
    for candidate in enumerate_move_sites(moved, INVERSE_KINDS[site.kind]):
        if apply_move(moved, candidate).to_json() == target:
            return candidate
    return None


def _reducing_sites(d: SingularDiagram) -> list[MoveSite]:
    return enumerate_move_sites(d, REDUCING_KINDS)


def _successors(
    current: SingularDiagram, workers: int
) -> list[tuple[MoveSite, SingularDiagram, str]]:
    """Apply every reducing move to ``current``, in site order."""

    def expand(site: MoveSite) -> tuple[MoveSite, SingularDiagram, str]:
        result = apply_move(current, site)
        return site, result, isomorphism_key(result)

    return ordered_map(expand, _reducing_sites(current), workers)


def simplify_with_witness(d: SingularDiagram, budget: int, workers: int = 1) -> SimplifyResult:
    """Breadth-first search over non-increasing moves for a smaller diagram.

    The search restarts from every diagram with fewer crossings than the best
    one found so far. Ties are broken by serialization. The moves out of one
    node are applied on up to ``workers`` threads and visited in site order,
    so the result does not depend on ``workers``.
    """
    best, best_path = d, ()
    seen = {isomorphism_key(d)}
    frontier: deque[tuple[SingularDiagram, tuple[MoveSite, ...]]] = deque([(d, ())])
    nodes = 0
    while frontier and nodes < budget and best.crossing_count:
        current, path = frontier.popleft()
        nodes += 1
        for site, result, key in _successors(current, workers):
            if key in seen:
                continue
            seen.add(key)
            result_path = (*path, site)
            if result.crossing_count < best.crossing_count:
                best, best_path = result, result_path
                frontier.clear()
                frontier.append((result, result_path))
                break
            if result.crossing_count == best.crossing_count and result.to_json() < best.to_json():
                best, best_path = result, result_path
            frontier.append((result, result_path))
    logger.debug(
        f"simplify: {d.crossing_count} -> {best.crossing_count} crossings after {nodes} nodes"
    )
    return SimplifyResult(diagram=best, witness=best_path, nodes=nodes)


def simplify(d: SingularDiagram, budget: int, workers: int = 1) -> SingularDiagram:
    """Return the smallest diagram found within the budget."""
    return simplify_with_witness(d, budget, workers).diagram


def _kink_at(d: SingularDiagram, p: int) -> bool:
    return _has_loop(d.crossing(p).ends)


def _resolutions_differ(d: SingularDiagram, p: int) -> bool:
    # Imported here: the bracket module sits above this one.
    from skein_integrator.invariants.bracket import jones_a  # noqa: PLC0415

    try:
        return jones_a(resolve(d, p, "plus").as_link()) != jones_a(
            resolve(d, p, "minus").as_link()
        )
    except CrossingCapExceededError:
        return False


def is_kink(d: SingularDiagram, p: int, budget: int) -> Verdict:
    """Decide whether the double point ``p`` sits on a kink."""
    if not d.crossing(p).is_singular:
        msg = f"Crossing {p} is not a double point"
        raise CrossingKindError(msg, {"crossing": p})
    if _kink_at(d, p):
        return "yes"
    if d.order == 1 and _resolutions_differ(d, p):
        return "no"

    seen = {(d.to_json(), p)}
    frontier = deque([(d, p)])
    nodes = 0
    while frontier and nodes < budget:
        current, tracked = frontier.popleft()
        nodes += 1
        for site in _reducing_sites(current):
            result = apply_move_tracked(current, site)
            moved = result.id_map[tracked]
            state = (result.diagram.to_json(), moved)
            if state in seen:
                continue
            seen.add(state)
            if _kink_at(result.diagram, moved):
                return "yes"
            frontier.append((result.diagram, moved))
    logger.warning(f"is_kink: no verdict for crossing {p} within {budget} nodes")
    return "unknown"


def _resolution_profile(d: SingularDiagram) -> list[tuple[int, str]] | None:
    from skein_integrator.invariants.bracket import jones_a  # noqa: PLC0415

    points = d.singular_ids()
    profile = []
    choices: tuple[ResolutionSign, ...] = ("plus", "minus")
    try:
        for signs in itertools.product(choices, repeat=len(points)):
            resolved = d
            for point, sign in zip(points, signs, strict=True):
                resolved = resolve(resolved, point, sign)
            value = jones_a(resolved.as_link())
            profile.append((signs.count("plus"), value.model_dump_json()))
    except CrossingCapExceededError:
        return None
    return sorted(profile)


def _search_step(
    frontier: deque[tuple[SingularDiagram, tuple[MoveSite, ...]]],
    seen: dict[str, tuple[MoveSite, ...]],
    workers: int,
) -> None:
    current, path = frontier.popleft()
    for site, result, key in _successors(current, workers):
        if key not in seen:
            seen[key] = (*path, site)
            frontier.append((result, (*path, site)))


def equivalence_report(
    d1: SingularDiagram, d2: SingularDiagram, budget: int, workers: int = 1
) -> EquivalenceReport:
    """Semi-decide equivalence of two diagrams.

    ``budget`` bounds the nodes expanded over both searches; ``workers``
    threads apply the moves out of each node.
    """
    if d1.order != d2.order:
        return EquivalenceReport(verdict="no", reason="different numbers of double points")
    if d1.components != d2.components:
        return EquivalenceReport(verdict="no", reason="different numbers of components")

    first_key, second_key = isomorphism_key(d1), isomorphism_key(d2)
    if first_key == second_key:
        return EquivalenceReport(verdict="yes", reason="isomorphic diagrams")

    first_profile, second_profile = _resolution_profile(d1), _resolution_profile(d2)
    if first_profile is not None and second_profile is not None and first_profile != second_profile:
        return EquivalenceReport(verdict="no", reason="Jones values of the resolutions differ")

    first_seen: dict[str, tuple[MoveSite, ...]] = {first_key: ()}
    second_seen: dict[str, tuple[MoveSite, ...]] = {second_key: ()}
    first_frontier = deque([(d1, ())])
    second_frontier = deque([(d2, ())])
    nodes = 0
    while (first_frontier or second_frontier) and nodes < budget:
        for frontier, seen in ((first_frontier, first_seen), (second_frontier, second_seen)):
            if frontier:
                _search_step(frontier, seen, workers)
                nodes += 1
        common = sorted(first_seen.keys() & second_seen.keys())
        if common:
            return EquivalenceReport(
                verdict="yes",
                reason="connected by moves",
                witness_from_first=first_seen[common[0]],
                witness_from_second=second_seen[common[0]],
            )
    logger.warning(f"equivalent: no verdict within {budget} nodes")
    return EquivalenceReport(verdict="unknown", reason="search budget exhausted")


def equivalent(
    d1: SingularDiagram, d2: SingularDiagram, budget: int, workers: int = 1
) -> Verdict:
    """Return yes, no or unknown."""
    return equivalence_report(d1, d2, budget, workers).verdict
