"""
Deterministic chunked evaluation over a thread pool.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np
from numpy.typing import NDArray

_logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 2048


def chunked_map(
    fn: Callable[[NDArray], NDArray],
    items: NDArray,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> NDArray:
    """
    Apply fn to consecutive chunks of items and concatenate the results in
    submission order.

    With threads=1 the chunks run inline, so the result is bit-reproducible
    and independent of the pool.

    Arguments:
        fn: maps an array of shape (n, ...) to one of shape (n, ...)
        items: the array to split along its first axis
        threads: number of worker threads
        chunk_size: maximal number of items per chunk

    Returns:
        the concatenated results

    Raises:
        ValueError: if threads or chunk_size is not positive
    """
    if threads < 1 or chunk_size < 1:
        raise ValueError(
            f"threads and chunk_size must be positive, got {threads}, "
            f"{chunk_size}"
        )

    chunks = [
        items[start : start + chunk_size]
        for start in range(0, len(items), chunk_size)
    ]
    if not chunks:
        return fn(items)

    if threads == 1 or len(chunks) == 1:
        results = [fn(chunk) for chunk in chunks]
    else:
        _logger.debug(f"Evaluating {len(chunks)} chunks on {threads} threads")
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(fn, chunks))

    return np.concatenate(results, axis=0)
