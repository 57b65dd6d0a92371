from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Tuple, TypeVar
import asyncio

from config import settings
from schemas.homology import FGAbGroup
from services.observability import observability_service

T = TypeVar("T")
R = TypeVar("R")


async def run_parallel(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Run func on every item in a worker pool

    Args:
        func: synchronous job
        items: job inputs
        threads: pool width, HOMOLOGY_THREADS by default

    Returns:
        Results in input order
    """
    items = list(items)
    if not items:
        return []
    threads = threads or settings.HOMOLOGY_THREADS
    loop = asyncio.get_running_loop()

    with ThreadPoolExecutor(max_workers=threads) as pool:
        tasks = [loop.run_in_executor(pool, func, item) for item in items]
        results = await asyncio.gather(*tasks)

    observability_service.log_debug(f"fan-out finished {len(items)} jobs on {threads} threads")
    return list(results)


def merge_groups(parts: List[Dict[Tuple[int, int, int], FGAbGroup]]) -> Dict[Tuple[int, int, int], FGAbGroup]:
    """Direct sum of tri-graded group tables from parallel branches"""
    merged: Dict[Tuple[int, int, int], FGAbGroup] = {}
    for part in parts:
        for degree, group in part.items():
            merged[degree] = merged[degree] + group if degree in merged else group
    return merged
