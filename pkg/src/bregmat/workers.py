"""Trial fan-out across threads, capped by the BREGMAT_THREADS variable.

Per-trial seed derivation makes every campaign's output independent of the
worker count and of scheduling, so parallelism never affects reports.
BREGMAT_THREADS=0 means one worker per CPU; unset means serial.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("BREGMAT_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        k = 1
    if k == 0:
        k = os.cpu_count() or 1
    return max(1, k)


def ordered_map(fn, items) -> list:
    """Like map(), but possibly threaded; output order always matches input."""
    k = worker_count()
    items = list(items)
    if k == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))
