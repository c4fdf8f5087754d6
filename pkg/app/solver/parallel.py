from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

T = TypeVar("T")

MIN_BLOCK = 256


def map_blocks(work: Callable[[int, int], T], n: int, threads: int = 1) -> List[T]:
    """Run ``work(start, stop)`` over contiguous blocks of range(n), in order."""
    if threads <= 1 or n < 2 * MIN_BLOCK:
        return [work(0, n)]
    size = max(MIN_BLOCK, -(-n // threads))
    bounds = [(start, min(start + size, n)) for start in range(0, n, size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(work, start, stop) for start, stop in bounds]
        return [future.result() for future in futures]
