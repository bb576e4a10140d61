"""Thread-pool map capped by the ``ISOTANGENT_THREADS`` environment variable."""

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "ISOTANGENT_THREADS"


def max_workers():
    raw = os.environ.get(ENV_THREADS, "").strip()
    if not raw:
        return min(4, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def pmap(func, items):
    """``list(map(func, items))``, run on a thread pool; order is preserved."""
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
