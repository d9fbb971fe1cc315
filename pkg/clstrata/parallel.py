"""Worker configuration and an order-preserving map over worker processes."""

import logging
import multiprocessing as mp
import os
from typing import Callable, List, Sequence, Tuple, TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV = "CLSTRATA_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """
    Number of worker processes from CLSTRATA_THREADS (default 1, serial).

    Invalid values fall back to 1 with a warning.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        workers = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {THREADS_ENV}={raw!r}: not an integer")
        return 1
    if workers < 1:
        logger.warning(f"Ignoring {THREADS_ENV}={raw!r}: must be at least 1")
        return 1
    return workers


def chunk_ranges(total: int, chunks: int) -> List[Tuple[int, int]]:
    """Split range(total) into at most `chunks` contiguous half-open ranges."""
    chunks = max(1, min(chunks, total))
    size, extra = divmod(total, chunks)
    ranges = []
    start = 0
    for i in range(chunks):
        stop = start + size + (1 if i < extra else 0)
        if stop > start:
            ranges.append((start, stop))
        start = stop
    return ranges


def ordered_map(func: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """
    Apply a picklable function to every item, results in input order.

    Runs serially unless CLSTRATA_THREADS asks for more than one worker.
    """
    workers = worker_count()
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    logger.debug(f"Mapping {len(items)} tasks over {workers} worker processes")
    with mp.Pool(processes=min(workers, len(items))) as pool:
        return pool.map(func, items)
