#!/usr/bin/python
"""
This module provides small helpers shared by the robust and oracle layers.

Functions:
    - parallel_map: Ordered map over a thread pool.
"""

from concurrent.futures import ThreadPoolExecutor

from dissiflow.config import Config


def parallel_map(function, items, workers=None):
    """
    Apply ``function`` to every item, possibly on several threads.

    Results come back in input order whatever the completion order, so
    reductions over them are deterministic.

    Args:
        function (callable): Pure function of one item.
        items (iterable): Inputs.
        workers (int, optional): Thread count; ``Config.WORKERS`` when omitted.

    Returns:
        list: ``[function(item) for item in items]``.
    """
    items = list(items)
    workers = Config.WORKERS if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as executor:
        return list(executor.map(function, items))
