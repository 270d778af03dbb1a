from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply ``fn`` to every item, in input order, on up to ``workers`` processes.

    A single worker runs in-process. ``fn`` and the items must be picklable otherwise.

    Args:
        fn (Callable[[T], R]): A module-level function or a bound method of a picklable object.
        items (Iterable[T]): Work units; results keep their order.
        workers (int): Process count.

    Returns:
        List[R]: ``[fn(item) for item in items]``.
    """
    if workers <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
