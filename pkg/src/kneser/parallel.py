"""Order-preserving process pool map."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def parallel_map(func, items, threads: int = 1) -> list:
    """``[func(x) for x in items]``, computed by up to ``threads`` processes.

    Results come back in input order whatever the scheduling, so callers see
    deterministic output.  ``func`` and the items must be picklable.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))
