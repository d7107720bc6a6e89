"""Deterministic index-parallel helper.

Work is split by index with results merged in index order, so outputs are
identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")


def map_indexed(fn: Callable[[int], T], n: int, threads: int = 1) -> list[T]:
    if threads <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n)))
