"""Order-preserving map over independent tasks.

``HELESTAB_THREADS`` (a positive integer) caps the number of worker
processes.  Unset, or ``1``, runs serially in the calling process.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "HELESTAB_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return n


def ordered_map(fn: Callable[[T], R], items: Iterable[T], chunksize: int = 8) -> list[R]:
    """``[fn(x) for x in items]``, possibly across processes.

    Results are gathered by index, so the output order never depends on
    completion order.  ``fn`` must be picklable when more than one worker is
    used.
    """
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
