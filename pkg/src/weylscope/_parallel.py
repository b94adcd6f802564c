"""Ordered parallel map capped by ``WEYLSCOPE_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def max_workers() -> int:
    raw = os.environ.get("WEYLSCOPE_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def ordered_map(fn, items):
    """``[fn(x) for x in items]`` run on a thread pool; output order is input order."""
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
