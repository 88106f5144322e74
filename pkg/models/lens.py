#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
贝叶斯透镜数据模型

Grothendieck 形式的透镜：前向信道加上以前向定义域为索引的状态依赖后向信道。
"""

from dataclasses import dataclass

from models.channel import Channel
from models.space import require_same
from models.stat_channel import StatChannel


@dataclass(frozen=True)
class BayesLens:
    """
    贝叶斯透镜 (X, A) ↛ (Y, B)

    forward: 信道 X → Y
    backward: StatChannel(X; B, A)
    简单透镜满足 A = X，B = Y。
    """
    forward: Channel
    backward: StatChannel

    def __post_init__(self):
        require_same(self.forward.dom, self.backward.index_space, "透镜后向分量的索引空间")

    @property
    def source(self):
        """(X, A)"""
        return self.forward.dom, self.backward.cod

    @property
    def target(self):
        """(Y, B)"""
        return self.forward.cod, self.backward.dom

    @property
    def is_simple(self) -> bool:
        return self.backward.cod == self.forward.dom and self.backward.dom == self.forward.cod

    def __str__(self):
        (x, a), (y, b) = self.source, self.target
        return f"<{self.forward.dom.name}->{self.forward.cod.name} | {self.backward}> : ({x.name},{a.name}) -> ({y.name},{b.name})"
