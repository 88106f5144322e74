#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
试验调度器

按试验下标执行随机试验，workers > 1 时使用进程池并行。每次试验从
(seed, 下标) 派生自己的随机流，结果按下标排序，串行与并行的输出一致。
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from utils.logger import get_logger
from utils.numeric import Number

logger = get_logger(__name__)


@dataclass
class TrialResult:
    """单次试验的结果；必须可以被 pickle，以便在进程之间传递"""
    index: int
    holds: bool
    gap: Number = 0
    witness: Optional[Dict[str, Any]] = None
    checks: Dict[str, bool] = field(default_factory=dict)


def run_trials(trial_fn: Callable[[int], TrialResult], count: int, workers: int = 1) -> List[TrialResult]:
    """
    执行 count 次试验

    Args:
        trial_fn: 顶层函数（或其 functools.partial），接收试验下标
        count: 试验次数
        workers: 进程数，1 表示串行

    Returns:
        List[TrialResult]: 按试验下标排序的结果
    """
    if workers > 1 and count > 1:
        logger.info(f"使用 {workers} 个进程并行执行 {count} 次试验")
        chunksize = max(1, count // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(trial_fn, range(count), chunksize=chunksize))
    else:
        logger.debug(f"串行执行 {count} 次试验")
        results = [trial_fn(index) for index in range(count)]
    return sorted(results, key=lambda r: r.index)
