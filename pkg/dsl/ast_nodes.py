#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
模型语言的语法树

所有节点都是不可变的；源码位置（line / column）不参与相等比较，
因此打印后再解析得到的语法树与原语法树结构相等。
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

QUERY_KINDS = ('infer', 'predict', 'verify', 'laws')

DistEntries = Tuple[Tuple[str, Fraction], ...]


@dataclass(frozen=True)
class Ref:
    name: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Compose:
    """left >> right：先 left 后 right"""
    left: "Expr"
    right: "Expr"
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Tensor:
    """left | right：并行（张量积）"""
    left: "Expr"
    right: "Expr"
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


Expr = Union[Ref, Compose, Tensor]


@dataclass(frozen=True)
class SpaceDecl:
    name: str
    elements: Tuple[str, ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PriorDecl:
    name: str
    space: str
    masses: DistEntries
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ChannelDecl:
    name: str
    dom: str
    cod: str
    rows: Tuple[Tuple[str, DistEntries], ...]
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LetDecl:
    name: str
    expr: Expr
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


Declaration = Union[SpaceDecl, PriorDecl, ChannelDecl, LetDecl]


@dataclass(frozen=True)
class Query:
    """
    推断查询

    infer 必须带观测；其余三种不带观测。
    """
    kind: str
    expr: Expr
    prior: str
    observation: Optional[str] = None
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.kind not in QUERY_KINDS:
            raise ValueError(f"未知的查询类型: {self.kind}")
        if (self.kind == 'infer') != (self.observation is not None):
            raise ValueError(f"{self.kind} 查询的观测设置不合法")


@dataclass(frozen=True)
class ModelAST:
    declarations: Tuple[Declaration, ...] = ()
    queries: Tuple[Query, ...] = ()


def referenced_names(expr: Expr):
    """表达式中按出现顺序引用的信道名"""
    if isinstance(expr, Ref):
        yield expr
    else:
        yield from referenced_names(expr.left)
        yield from referenced_names(expr.right)


def seq_factors(expr: Expr) -> Tuple[Expr, ...]:
    """
    把顶层的 >> 链展开成因子序列

    括号内的 >> 也展开（顺序复合满足结合律）；| 节点作为整体出现。
    """
    if isinstance(expr, Compose):
        return seq_factors(expr.left) + seq_factors(expr.right)
    return (expr,)
