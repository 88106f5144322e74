#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
模型校验器

把语法树绑定为库对象：空间、先验分布、信道表，以及 let 与查询中的管道表达式。
库抛出的异常被包装为带源码位置的 ValidationError。
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from dsl.ast_nodes import (ChannelDecl, Compose, DistEntries, Expr, LetDecl,
                           ModelAST, PriorDecl, Query, Ref, SpaceDecl, Tensor,
                           seq_factors)
from models.channel import Channel, channel_from_table, seq_compose, tensor
from models.dist import Dist, make_dist
from models.errors import BayesLensError, SpaceMismatch, ValidationError
from models.space import Space, product_space
from utils.logger import get_logger
from utils.numeric import NumericMode, to_number

logger = get_logger(__name__)


@dataclass(frozen=True)
class BoundQuery:
    """绑定后的查询：管道信道、按 >> 拆开的各段，以及先验"""
    query: Query
    pipeline: Channel
    stages: Tuple[Channel, ...]
    prior: Dist

    @property
    def kind(self) -> str:
        return self.query.kind

    @property
    def observation(self) -> Optional[str]:
        return self.query.observation


@dataclass
class BoundModel:
    ast: ModelAST
    mode: NumericMode
    spaces: Dict[str, Space] = field(default_factory=dict)
    priors: Dict[str, Dist] = field(default_factory=dict)
    channels: Dict[str, Channel] = field(default_factory=dict)
    lets: Dict[str, Channel] = field(default_factory=dict)
    queries: List[BoundQuery] = field(default_factory=list)

    def pipeline(self, name: str) -> Channel:
        if name in self.channels:
            return self.channels[name]
        return self.lets[name]


class _Binder:
    def __init__(self, ast: ModelAST, mode: NumericMode):
        self.model = BoundModel(ast, mode)

    def space(self, ref: str) -> Space:
        """解析空间引用；X*Y*Z 按左结合构造乘积空间"""
        factors = [self.model.spaces[name] for name in ref.split("*")]
        space = factors[0]
        for factor in factors[1:]:
            space = product_space(space, factor)
        return space

    def _dist(self, space: Space, entries: DistEntries) -> Dist:
        mode = self.model.mode
        return make_dist(space, [(e, to_number(v, mode)) for e, v in entries])

    def declare(self, node):
        model = self.model
        if isinstance(node, SpaceDecl):
            model.spaces[node.name] = Space(node.name, node.elements)
        elif isinstance(node, PriorDecl):
            model.priors[node.name] = self._dist(self.space(node.space), node.masses)
        elif isinstance(node, ChannelDecl):
            dom, cod = self.space(node.dom), self.space(node.cod)
            table = [(x, self._dist(cod, masses)) for x, masses in node.rows]
            model.channels[node.name] = channel_from_table(dom, cod, table)
        elif isinstance(node, LetDecl):
            model.lets[node.name] = self.evaluate(node.expr)

    def evaluate(self, expr: Expr) -> Channel:
        """表达式求值；>> 或 | 两侧不匹配时在运算符位置报错"""
        if isinstance(expr, Ref):
            return self.model.pipeline(expr.name)
        left, right = self.evaluate(expr.left), self.evaluate(expr.right)
        try:
            if isinstance(expr, Compose):
                return seq_compose(left, right)
            return tensor(left, right)
        except BayesLensError as e:
            raise ValidationError(e, expr.line, expr.column) from e

    def bind_query(self, query: Query) -> BoundQuery:
        pipeline = self.evaluate(query.expr)
        stages = tuple(self.evaluate(part) for part in seq_factors(query.expr))
        prior = self.model.priors[query.prior]
        if prior.space != pipeline.dom:
            raise SpaceMismatch(
                f"先验 {query.prior} 定义在 {prior.space.name} 上，管道的定义域是 {pipeline.dom.name}"
            )
        if query.observation is not None:
            pipeline.cod.check(query.observation)
        return BoundQuery(query, pipeline, stages, prior)


def validate_model(ast: ModelAST, mode: NumericMode = NumericMode.RATIONAL) -> BoundModel:
    """
    校验并绑定模型

    Args:
        ast: parse_model 的结果
        mode: 数值模式，决定先验与信道表中数字的表示

    Returns:
        BoundModel: 绑定好的模型

    Raises:
        ValidationError: 包装 NotNormalized、SpaceMismatch、UnknownElement 等，附源码位置
    """
    binder = _Binder(ast, mode)
    for node in ast.declarations:
        try:
            binder.declare(node)
        except ValidationError:
            raise
        except BayesLensError as e:
            raise ValidationError(e, node.line, node.column) from e
    for query in ast.queries:
        try:
            binder.model.queries.append(binder.bind_query(query))
        except ValidationError:
            raise
        except BayesLensError as e:
            raise ValidationError(e, query.line, query.column) from e
    model = binder.model
    logger.debug(f"校验完成: {len(model.spaces)} 个空间，{len(model.channels)} 个信道，"
                 f"{len(model.queries)} 个查询")
    return model
