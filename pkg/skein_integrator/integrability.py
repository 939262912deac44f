"""Corpora of singular diagrams and the local integrability conditions."""

import random
from collections.abc import Sequence
from typing import Literal, Self

from logzero import logger
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from skein_integrator.diagram import LinkDiagram, SingularDiagram
from skein_integrator.errors import CorpusGenerationError
from skein_integrator.invariants.base_invariant import BaseSingularInvariant
from skein_integrator.moves import (
    CROSSING_DELTA,
    MoveSite,
    apply_move,
    apply_move_tracked,
    enumerate_move_sites,
    is_kink,
    make_singular,
    resolve,
)
from skein_integrator.ring import RingElem
from skein_integrator.workers import ordered_map

CorpusKind = Literal["kink", "order2"]
Condition = Literal["kink", "commutation"]

# Nodes is_kink may spend certifying a generated item.
KINK_CERTIFICATION_BUDGET = 200


class CorpusParams(BaseModel):
    """Parameters that, with the seeds, determine a corpus."""

    walk_length: int = Field(default=5, ge=0)
    size: int = Field(default=10, ge=1)
    random_seed: int = 0
    max_crossings: int = Field(default=10, ge=2)
    # Crossing ids to singularize in every order-2 item instead of random ones.
    fixed_crossings: tuple[int, int] | None = None
    model_config = ConfigDict(frozen=True)


class CorpusItem(BaseModel):
    """A generated diagram with its provenance."""

    diagram: SingularDiagram
    seed_index: int
    walk: tuple[MoveSite, ...] = ()
    double_points: tuple[int, ...]
    model_config = ConfigDict(frozen=True)


class Corpus(BaseModel):
    """Reproducible collection of singular diagrams of one order."""

    kind: CorpusKind
    seeds: tuple[LinkDiagram, ...]
    params: CorpusParams
    items: tuple[CorpusItem, ...]
    model_config = ConfigDict(frozen=True)

    @property
    def order(self) -> int:
        """Number of double points of every item."""
        return 1 if self.kind == "kink" else 2

    @model_validator(mode="after")
    def _items_have_order(self) -> Self:
        for index, item in enumerate(self.items):
            if item.diagram.order != self.order:
                msg = f"Item {index} has order {item.diagram.order}, expected {self.order}"
                raise ValueError(msg)
            if sorted(item.double_points) != sorted(item.diagram.singular_ids()):
                msg = f"Item {index} lists double points {item.double_points}"
                raise ValueError(msg)
        return self


class ConditionFailure(BaseModel):
    """An item on which a condition does not hold."""

    item: int
    diagram: SingularDiagram
    labeling: tuple[int, ...]
    lhs: RingElem | None = None
    rhs: RingElem | None = None
    error: str | None = None
    model_config = ConfigDict(frozen=True)


class ConditionReport(BaseModel):
    """Outcome of checking one condition over a corpus."""

    condition: Condition
    items_tested: int
    failures: tuple[ConditionFailure, ...] = ()
    model_config = ConfigDict(frozen=True)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        """Whether no item failed."""
        return not self.failures


def random_walk(
    d: SingularDiagram, length: int, rng: random.Random, max_crossings: int
) -> tuple[SingularDiagram, tuple[MoveSite, ...]]:
    """Apply ``length`` random moves that keep at most ``max_crossings`` crossings."""
    current = d
    sites = []
    for _ in range(length):
        candidates = [
            site
            for site in enumerate_move_sites(current)
            if current.crossing_count + CROSSING_DELTA[site.kind] <= max_crossings
        ]
        if not candidates:
            break
        site = rng.choice(candidates)
        current = apply_move(current, site)
        sites.append(site)
    return current, tuple(sites)


def _check_seeds(seeds: Sequence[LinkDiagram]) -> None:
    if not seeds:
        msg = "At least one seed diagram is needed"
        raise CorpusGenerationError(msg)


def gen_kink_corpus(seeds: Sequence[LinkDiagram], params: CorpusParams) -> Corpus:
    """Generate order-1 diagrams whose double point sits on a curl.

    Each item walks a seed, adds a curl and singularizes the new crossing.
    """
    _check_seeds(seeds)
    rng = random.Random(params.random_seed)
    items = []
    for index in range(params.size):
        seed_index = index % len(seeds)
        walked, walk = random_walk(
            seeds[seed_index], params.walk_length, rng, params.max_crossings - 1
        )
        curl = rng.choice(enumerate_move_sites(walked, ("R1_add_pos", "R1_add_neg")))
        added = apply_move_tracked(walked, curl)
        (point,) = added.created
        diagram = make_singular(added.diagram, point)
        if is_kink(diagram, point, KINK_CERTIFICATION_BUDGET) != "yes":
            msg = f"Item {index} failed kink certification"
            raise CorpusGenerationError(msg, {"item": index})
        items.append(
            CorpusItem(
                diagram=diagram,
                seed_index=seed_index,
                walk=(*walk, curl),
                double_points=(point,),
            )
        )
    logger.info(f"Generated {len(items)} kink items from {len(seeds)} seeds")
    return Corpus(kind="kink", seeds=tuple(seeds), params=params, items=tuple(items))


def gen_order2_corpus(seeds: Sequence[LinkDiagram], params: CorpusParams) -> Corpus:
    """Generate order-2 diagrams by singularizing two crossings of walked seeds.

    Raises
    ------
    CorpusGenerationError
        If a walked seed has fewer than two signed crossings, or the fixed
        crossings are not signed crossings of it.
    """
    _check_seeds(seeds)
    rng = random.Random(params.random_seed)
    items = []
    for index in range(params.size):
        seed_index = index % len(seeds)
        walked, walk = random_walk(
            seeds[seed_index], params.walk_length, rng, params.max_crossings
        )
        signed = [c.id for c in walked.crossings if not c.is_singular]
        if params.fixed_crossings is not None:
            p, q = params.fixed_crossings
            if p == q or p not in signed or q not in signed:
                msg = f"Crossings {p} and {q} are not two signed crossings of item {index}"
                raise CorpusGenerationError(msg, {"item": index, "signed": signed})
        elif len(signed) < 2:  # noqa: PLR2004
            msg = f"Seed {seed_index} has fewer than two crossings after walking"
            raise CorpusGenerationError(msg, {"item": index, "seed": seed_index})
        else:
            p, q = rng.sample(signed, 2)
        diagram = make_singular(make_singular(walked, p), q)
        items.append(
            CorpusItem(diagram=diagram, seed_index=seed_index, walk=walk, double_points=(p, q))
        )
    logger.info(f"Generated {len(items)} order-2 items from {len(seeds)} seeds")
    return Corpus(kind="order2", seeds=tuple(seeds), params=params, items=tuple(items))


def _kink_failures(
    f: BaseSingularInvariant, index: int, item: CorpusItem
) -> list[ConditionFailure]:
    try:
        value = f.evaluate(item.diagram)
    except Exception as e:  # noqa: BLE001
        logger.exception(f"Error evaluating item {index}")
        return [
            ConditionFailure(
                item=index, diagram=item.diagram, labeling=item.double_points, error=str(e)
            )
        ]
    if value.is_zero:
        return []
    return [
        ConditionFailure(
            item=index,
            diagram=item.diagram,
            labeling=item.double_points,
            lhs=value,
            rhs=RingElem.zero(),
        )
    ]


def check_condition1(
    f: BaseSingularInvariant, corpus: Corpus, workers: int = 1
) -> ConditionReport:
    """Check that ``f`` vanishes on every kink of the corpus.

    Items are evaluated on up to ``workers`` threads; failures are reported in
    item order.
    """
    if corpus.kind != "kink":
        msg = f"The kink condition needs a kink corpus, got {corpus.kind}"
        raise ValueError(msg)
    per_item = ordered_map(
        lambda indexed: _kink_failures(f, *indexed), list(enumerate(corpus.items)), workers
    )
    failures = [failure for item_failures in per_item for failure in item_failures]
    logger.info(f"kink condition: {len(failures)} failures in {len(corpus.items)} items")
    return ConditionReport(
        condition="kink", items_tested=len(corpus.items), failures=tuple(failures)
    )


def _difference(f: BaseSingularInvariant, d: SingularDiagram, point: int) -> RingElem:
    return f.evaluate(resolve(d, point, "plus")) - f.evaluate(resolve(d, point, "minus"))


def _commutation_failures(
    f: BaseSingularInvariant, index: int, item: CorpusItem
) -> list[ConditionFailure]:
    failures = []
    first, second = item.double_points
    for p, q in ((first, second), (second, first)):
        try:
            lhs = _difference(f, item.diagram, q)
            rhs = _difference(f, item.diagram, p)
        except Exception as e:  # noqa: BLE001
            logger.exception(f"Error evaluating item {index} with labeling {(p, q)}")
            failures.append(
                ConditionFailure(item=index, diagram=item.diagram, labeling=(p, q), error=str(e))
            )
            continue
        if lhs != rhs:
            failures.append(
                ConditionFailure(
                    item=index, diagram=item.diagram, labeling=(p, q), lhs=lhs, rhs=rhs
                )
            )
    return failures


def check_condition2(
    f: BaseSingularInvariant, corpus: Corpus, workers: int = 1
) -> ConditionReport:
    """Check the commutation condition for both labelings of every item.

    For double points ``(p, q)`` the two sides are the differences of ``f``
    across the resolutions of ``q`` and of ``p``.
    """
    if corpus.kind != "order2":
        msg = f"The commutation condition needs an order-2 corpus, got {corpus.kind}"
        raise ValueError(msg)
    per_item = ordered_map(
        lambda indexed: _commutation_failures(f, *indexed),
        list(enumerate(corpus.items)),
        workers,
    )
    failures = [failure for item_failures in per_item for failure in item_failures]
    logger.info(f"commutation condition: {len(failures)} failures in {len(corpus.items)} items")
    return ConditionReport(
        condition="commutation", items_tested=len(corpus.items), failures=tuple(failures)
    )
