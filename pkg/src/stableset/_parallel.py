"""Process pools shared by every solver call in this interpreter.

Block subproblems are CPU bound pure-Python work, so parallelism goes through
processes. Pools are created lazily per worker count and reused; start-up
cost is paid once.
"""
from __future__ import annotations

import multiprocessing as mp
import threading
from concurrent.futures import ProcessPoolExecutor

_pools: dict[int, ProcessPoolExecutor] = {}
_lock = threading.Lock()


def get_pool(workers: int) -> ProcessPoolExecutor:
    with _lock:
        pool = _pools.get(workers)
        if pool is None:
            # forkserver: callers may already be running threads
            pool = ProcessPoolExecutor(workers, mp_context=mp.get_context("forkserver"))
            _pools[workers] = pool
        return pool


def shutdown_pools() -> None:
    with _lock:
        for pool in _pools.values():
            pool.shutdown(wait=True, cancel_futures=True)
        _pools.clear()
