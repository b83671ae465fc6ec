"""Deterministic parallel map capped by SUPERTWIST_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_cap() -> int:
    raw = os.environ.get("SUPERTWIST_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SUPERTWIST_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"SUPERTWIST_THREADS must be a positive integer, got {raw!r}")
    return n


def pmap(fn, items) -> list:
    """map(fn, items) with results in input order."""
    items = list(items)
    n = thread_cap()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
