"""Thread fan-out for independent schedule points and table rows"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from ..types.config import LabSettings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    """Worker cap: PB4_THREADS when set, otherwise the CPU count"""
    settings = LabSettings.from_env()
    return settings.threads or os.cpu_count() or 1


def parallel_map(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map func over items on a thread pool; results keep the input order"""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    logger.debug("mapping %d items on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
