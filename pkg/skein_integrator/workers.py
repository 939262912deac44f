"""Ordered fan-out of independent work items over a thread pool."""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from logzero import logger

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to every item on up to ``workers`` threads.

    Results come back in the order of ``items`` whatever the number of
    workers, and the first exception raised by ``fn`` propagates.

    Raises
    ------
    ValueError
        If ``workers`` is smaller than one.
    """
    if workers < 1:
        msg = f"Need at least one worker, got {workers}"
        raise ValueError(msg)
    if workers == 1 or len(items) < 2:  # noqa: PLR2004
        return [fn(item) for item in items]
    logger.debug(f"Fanning {len(items)} items out to {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
