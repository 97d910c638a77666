"""
Process-pool mapping for sweep grids
"""

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from loguru import logger

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: int) -> int:
    """-1 means one worker per core"""
    if workers < 0:
        return os.cpu_count() or 1
    return max(workers, 1)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Map a picklable callable over items, preserving order

    Runs serially when a single worker is requested.
    """
    items = list(items)
    workers = min(resolve_workers(workers), max(len(items), 1))
    if workers == 1:
        return [fn(item) for item in items]

    logger.debug(f"Mapping {len(items)} grid points over {workers} processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
