import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("WN_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items, threads: int | None = None) -> list:
    """``list(map(fn, items))``; results keep input order whatever the thread count."""
    items = list(items)
    n = threads or thread_count()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
