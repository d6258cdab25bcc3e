"""线程池工具 - 受 CORNERLAB_THREADS 限制"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .config import settings

T = TypeVar("T")
R = TypeVar("R")


def worker_count(threads: Optional[int] = None) -> int:
    """解析实际使用的线程数"""
    requested = settings.cornerlab_threads if threads is None else threads
    if requested <= 0:
        return max(1, os.cpu_count() or 1)
    return requested


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    并行映射，结果顺序与输入一致

    Args:
        fn: 纯函数
        items: 输入序列
        threads: 线程数覆盖

    Returns:
        List[R]: 与输入同序的结果
    """
    items = list(items)
    workers = min(worker_count(threads), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
