"""Order-preserving parallel map."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from stylescope.config import settings

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None
) -> List[R]:
    """Apply ``func`` to every item, returning results in input order.

    Runs inline when only one worker is allowed or there is a single item.
    """
    items = list(items)
    workers = min(threads or settings.threads, len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
