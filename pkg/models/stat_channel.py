#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
依赖状态的信道数据模型

Stat(X) 的态射：从 X 上的分布到信道 A → B 的映射。它以函数的形式外延地表示，
因此两个 StatChannel 只能在采样的索引状态上逐点比较。
"""

from dataclasses import dataclass, field
from typing import Callable, FrozenSet

from models.channel import Channel
from models.dist import Dist
from models.errors import SpaceMismatch
from models.space import Space, require_same


@dataclass(frozen=True)
class StatChannel:
    """
    X-状态依赖信道

    fn 必须是纯函数；调用时校验索引状态的空间和返回信道的形状。
    """
    index_space: Space
    dom: Space
    cod: Space
    fn: Callable[[Dist], Channel] = field(compare=False)
    label: str = field(default="", compare=False)

    def __call__(self, prior: Dist) -> Channel:
        require_same(self.index_space, prior.space, "状态依赖信道的索引状态空间")
        channel = self.fn(prior)
        if channel.dom != self.dom or channel.cod != self.cod:
            raise SpaceMismatch(
                f"状态依赖信道 {self.label or '<匿名>'} 返回了形状 {channel.dom.name} → {channel.cod.name}，"
                f"声明的是 {self.dom.name} → {self.cod.name}"
            )
        return channel

    def __str__(self):
        name = self.label or "stat"
        return f"{name}[{self.index_space.name}; {self.dom.name} -> {self.cod.name}]"


@dataclass(frozen=True)
class InversionResult:
    """
    贝叶斯反演结果

    zero_support 记录 c∘π 质量为 0 的陪域元素；这些行按约定取先验 π。
    """
    channel: Channel
    zero_support: FrozenSet[str] = frozenset()

    def to_dict(self):
        data = self.channel.to_dict()
        data['zero_support'] = [y for y in self.channel.dom if y in self.zero_support]
        return data
