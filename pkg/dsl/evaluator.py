#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
查询求值器

infer 返回后验分布，predict 返回预测分布，verify 在管道的每个 >> 切分点上
检查复合定理，laws 返回精确透镜在指定先验下的三条定律报告。
"""

import time
from typing import List, Union

from dsl.validator import BoundModel, BoundQuery
from models.channel import Channel, identity_channel, push_state, seq_compose
from models.dist import Dist
from models.errors import EmptyPushforward
from models.report import LawReport, Report
from models.run_config import RunConfig
from models.stat_channel import InversionResult
from processors.inversion import invert
from processors.lens import (check_getput, check_putget_at, check_putput_at,
                             verify_composition)
from utils.logger import get_logger
from utils.numeric import number_to_json

logger = get_logger(__name__)

QueryResult = Union[Dist, Report, List[LawReport]]

# 模型查询只依赖数值设置，随机试验相关的配置不回显
QUERY_CONFIG_KEYS = ('numeric_mode', 'tolerance')


def _compose_all(stages) -> Channel:
    result = stages[0]
    for stage in stages[1:]:
        result = seq_compose(result, stage)
    return result


def inversion(query: BoundQuery) -> InversionResult:
    """管道相对先验的完整反演，零支撑观测一并记录"""
    return invert(query.pipeline, query.prior)


def infer(query: BoundQuery, config: RunConfig) -> Dist:
    """
    观测后的后验：invert(pipeline, prior) 在观测处的行

    Raises:
        EmptyPushforward: 观测的预测质量为 0，异常中带有预测分布
    """
    predicted = push_state(query.pipeline, query.prior)
    y = query.observation
    if predicted.mass(y) == 0:
        raise EmptyPushforward(f"观测 {y!r} 的预测质量为 0", predicted=predicted)
    return inversion(query).channel.rows[y]


def predict(query: BoundQuery) -> Dist:
    return push_state(query.pipeline, query.prior)


def verify(query: BoundQuery, config: RunConfig) -> Report:
    """在每个 >> 切分点上检查复合定理；没有 >> 时与恒等信道复合"""
    started = time.perf_counter()
    echo = config.to_dict()
    report = Report('verify', {key: echo[key] for key in QUERY_CONFIG_KEYS})
    stages = list(query.stages)
    if len(stages) == 1:
        stages.append(identity_channel(stages[0].cod))
    splits = []
    for k in range(1, len(stages)):
        c, d = _compose_all(stages[:k]), _compose_all(stages[k:])
        result = verify_composition(c, d, query.prior, config.tolerance)
        witness = None
        if not result.holds:
            witness = {'split': k, 'lhs': result.lhs.to_dict(), 'rhs': result.rhs.to_dict()}
        report.record(result.holds, result.max_gap, witness)
        splits.append({'split': k, 'holds': result.holds, 'gap': number_to_json(result.max_gap)})
    report.sections['splits'] = splits
    report.wall_clock = time.perf_counter() - started
    return report


def laws(query: BoundQuery, config: RunConfig) -> List[LawReport]:
    """
    GetPut、obs = c∘π 处的 PutGet，以及所有观测对上的 PutPut（返回第一个失败）
    """
    c, pi, tol = query.pipeline, query.prior, config.tolerance
    predicted = push_state(c, pi)
    getput = check_getput(c, pi, tol)
    putget = check_putget_at(c, pi, predicted, tol)
    putput = LawReport('PutPut', True, note="所有观测对都满足")
    checked = 0
    for first in predicted.support():
        for second in predicted.support():
            report = check_putput_at(c, pi, first, second, tol)
            checked += 1
            if not report.holds:
                report.trials = checked
                report.note = f"y1={first} y2={second}"
                putput = report
                break
        if not putput.holds:
            break
    return [getput, putget, putput]


def run_query(model: BoundModel, query: BoundQuery, config: RunConfig) -> QueryResult:
    """
    执行一个查询

    Args:
        model: 已校验的模型
        query: 模型中的查询
        config: 运行配置

    Returns:
        Dist、Report 或 LawReport 列表，取决于查询类型
    """
    if not any(q is query for q in model.queries):
        raise ValueError("查询不属于该模型")
    logger.debug(f"执行查询 {query.kind}（第 {query.query.line} 行）")
    if query.kind == 'infer':
        result = infer(query, config)
        logger.info(f"后验: {result}")
        return result
    if query.kind == 'predict':
        return predict(query)
    if query.kind == 'verify':
        return verify(query, config)
    return laws(query, config)


def describe(result: QueryResult) -> str:
    """查询结果的单行文本"""
    if isinstance(result, Dist):
        return str(result)
    if isinstance(result, Report):
        return result.format_text()
    return "\n".join(str(r) for r in result)
