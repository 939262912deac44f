"""The degree-2 Vassiliev invariant and the Conway polynomial."""

from collections import Counter

from logzero import logger

from skein_integrator.diagram import (
    LinkDiagram,
    Passage,
    arc_cycles,
    basepoint_options,
    components,
    gauss_sequence,
    non_descending_crossings,
)
from skein_integrator.errors import BudgetExceededError, CrossingKindError, DiagramError
from skein_integrator.moves import crossing_change, make_singular, resolve

DEFAULT_SKEIN_BUDGET = 20_000


def _require_knot(d: LinkDiagram) -> None:
    if d.order:
        msg = "The invariant is defined on links without double points"
        raise CrossingKindError(msg, {"double_points": list(d.singular_ids())})
    if components(d) != 1:
        msg = f"Expected a knot, got {components(d)} components"
        raise DiagramError(msg, {"components": components(d)})


def _arrow_pairs(sequence: list[Passage]) -> int:
    under_at: dict[int, int] = {}
    over_at: dict[int, int] = {}
    sign: dict[int, int] = {}
    for index, passage in enumerate(sequence):
        (over_at if passage.over else under_at)[passage.crossing] = index
        sign[passage.crossing] = passage.sign
    return sum(
        sign[i] * sign[j]
        for i in under_at
        for j in under_at
        if i != j and under_at[i] < over_at[j] < over_at[i] < under_at[j]
    )


def v2_gauss(d: LinkDiagram) -> int:
    """Degree-2 Vassiliev invariant of a knot from its Gauss diagram.

    Counts pairs of crossings met in the order under i, over j, over i, under j
    from the basepoint, weighted by the product of their signs. The count is
    averaged over all basepoints.

    Raises
    ------
    DiagramError
        If the diagram is not a knot, or the average is not an integer.
    """
    _require_knot(d)
    cycles = arc_cycles(d)
    if not cycles:
        return 0
    passages = gauss_sequence(d, cycles[0][0])
    total = sum(
        _arrow_pairs(passages[shift:] + passages[:shift]) for shift in range(len(passages))
    )
    value, remainder = divmod(total, len(passages))
    if remainder:
        msg = f"Basepoint average {total}/{len(passages)} is not an integer"
        raise DiagramError(msg, {"total": total, "basepoints": len(passages)})
    return value


class _ConwayRecursion:
    """Skein recursion that switches crossings until the diagram is descending."""

    def __init__(self, budget: int) -> None:
        self.budget = budget
        self.nodes = 0
        self.memo: dict[str, Counter[int]] = {}

    def __call__(self, d: LinkDiagram) -> Counter[int]:
        key = d.to_json()
        if key in self.memo:
            return self.memo[key]
        self.nodes += 1
        if self.nodes > self.budget:
            msg = f"Skein recursion exceeded its budget of {self.budget} diagrams"
            raise BudgetExceededError(msg, {"budget": self.budget})

        starts = basepoint_options(d)[0]
        switches = non_descending_crossings(d, starts)
        if not switches:
            result = Counter({0: 1}) if components(d) == 1 else Counter()
        else:
            crossing = d.crossing(switches[0])
            switched, _ = crossing_change(d, crossing.id)
            smoothed = resolve(make_singular(d, crossing.id), crossing.id, "zero").as_link()
            result = Counter(self(switched))
            for degree, coeff in self(smoothed).items():
                result[degree + 1] += crossing.sign * coeff
        self.memo[key] = result
        return result


def conway_polynomial(d: LinkDiagram, budget: int = DEFAULT_SKEIN_BUDGET) -> dict[int, int]:
    """Return the Conway polynomial as a map from degree to coefficient.

    Uses ``C(L+) - C(L-) = z C(L0)`` on the first crossing that keeps the
    diagram from being descending; descending diagrams are unlinks.

    Raises
    ------
    BudgetExceededError
        If more than ``budget`` distinct diagrams are visited.
    """
    recursion = _ConwayRecursion(budget)
    polynomial = recursion(d)
    logger.debug(f"conway: {recursion.nodes} diagrams for {d.crossing_count} crossings")
    return {degree: coeff for degree, coeff in sorted(polynomial.items()) if coeff}


def v2_skein_oracle(d: LinkDiagram, budget: int = DEFAULT_SKEIN_BUDGET) -> int:
    """Return the z**2 coefficient of the Conway polynomial of a knot."""
    _require_knot(d)
    return conway_polynomial(d, budget).get(2, 0)
