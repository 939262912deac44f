"""Kauffman bracket state sum and the Jones invariant in the variable A."""

import itertools
from collections import Counter
from functools import lru_cache

import sympy as sp
from networkx.utils import UnionFind

from skein_integrator.diagram import LinkDiagram, SingularDiagram, planarity_genus, writhe
from skein_integrator.errors import CrossingCapExceededError, DiagramError
from skein_integrator.ring import A, RingElem

DEFAULT_CROSSING_CAP = 14
LOOP_VALUE = -(A**2) - A**-2


def state_counts(d: SingularDiagram) -> Counter[tuple[int, int]]:
    """Count smoothing states by (A-smoothings minus B-smoothings, number of loops).

    The A-smoothing of a crossing joins positions 0 with 1 and 2 with 3; the
    B-smoothing joins 0 with 3 and 1 with 2. Crossingless components count as
    loops in every state.
    """
    counts: Counter[tuple[int, int]] = Counter()
    n = d.crossing_count
    for state in itertools.product((True, False), repeat=n):
        loops = UnionFind(d.arcs)
        for crossing, a_smoothing in zip(d.crossings, state, strict=True):
            e0, e1, e2, e3 = crossing.ends
            if a_smoothing:
                loops.union(e0, e1)
                loops.union(e2, e3)
            else:
                loops.union(e0, e3)
                loops.union(e1, e2)
        a_count = sum(state)
        loop_count = len(list(loops.to_sets())) + d.zero_crossing_components
        counts[(2 * a_count - n, loop_count)] += 1
    return counts


@lru_cache(maxsize=8192)
def _bracket_of(serialized: str) -> RingElem:
    d = SingularDiagram.model_validate_json(serialized)
    expr = sp.Add(
        *(
            count * A**exponent * LOOP_VALUE ** (loops - 1)
            for (exponent, loops), count in state_counts(d).items()
        )
    )
    return RingElem.from_sympy(expr)


def kauffman_bracket(d: LinkDiagram, crossing_cap: int = DEFAULT_CROSSING_CAP) -> RingElem:
    """Return the Kauffman bracket of a link diagram.

    Parameters
    ----------
    d
        Diagram without double points, drawn on the sphere.
    crossing_cap
        Largest crossing count accepted; the state sum has 2**n terms.

    Raises
    ------
    CrossingCapExceededError
        If the diagram has more crossings than ``crossing_cap``.
    DiagramError
        If the diagram is not planar.
    """
    if d.crossing_count > crossing_cap:
        msg = f"Diagram has {d.crossing_count} crossings, above the cap of {crossing_cap}"
        raise CrossingCapExceededError(
            msg, {"crossings": d.crossing_count, "cap": crossing_cap}
        )
    if planarity_genus(d):
        msg = "Kauffman bracket needs a planar diagram"
        raise DiagramError(msg, {"genus": planarity_genus(d)})
    return _bracket_of(d.to_json())


def jones_a(d: LinkDiagram, crossing_cap: int = DEFAULT_CROSSING_CAP) -> RingElem:
    """Return ``(-A)**(-3 w) <d>``, the writhe-normalized bracket."""
    w = writhe(d)
    bracket = kauffman_bracket(d, crossing_cap)
    return bracket.shift(-3 * w).scale(-1 if w % 2 else 1)
