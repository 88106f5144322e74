#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
随机生成工具模块

为随机验证生成空间、分布和信道。每次试验的随机流由 (seed, 试验下标) 派生，
因此串行与并行运行得到相同的结果。
"""

from fractions import Fraction
from typing import List

import numpy as np

from models.channel import Channel
from models.dist import Dist
from models.measure import DensityChannel, Effect, Measure
from models.space import ProductSpace, Space
from utils.numeric import Number, NumericMode

# 每个元素的整数权重取值范围
_WEIGHT_LOW = 1
_WEIGHT_HIGH = 16


def trial_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """由 (seed, 流编号, 试验下标) 派生独立的随机数生成器；不同检查使用不同的流"""
    return np.random.default_rng([int(seed), int(stream), int(index)])


def random_space(rng: np.random.Generator, name: str, max_dim: int, min_dim: int = 2) -> Space:
    """
    生成维数在 [min_dim, max_dim] 内的空间

    Args:
        rng: 随机数生成器
        name: 空间名，同时用作元素前缀的小写形式
        max_dim: 最大维数
        min_dim: 最小维数
    """
    dim = int(rng.integers(min_dim, max_dim + 1))
    prefix = name.lower()
    return Space(name, tuple(f"{prefix}{i}" for i in range(dim)))


def _floor_weights(rng: np.random.Generator, count: int, mode: NumericMode) -> List[Number]:
    """
    带下限的权重：每个质量至少 1/(4·count)，其余 3/4 按随机整数权重分配

    有理数与浮点模式使用同一组整数，因此两种模式跑的是同一批试验。
    """
    raw = [int(v) for v in rng.integers(_WEIGHT_LOW, _WEIGHT_HIGH + 1, size=count)]
    total = sum(raw)
    weights = [Fraction(1, 4 * count) + Fraction(3, 4) * Fraction(v, total) for v in raw]
    if mode == NumericMode.FLOAT:
        return [float(w) for w in weights]
    return weights


def random_dist(space: Space, rng: np.random.Generator,
                mode: NumericMode = NumericMode.RATIONAL, sparse: bool = False) -> Dist:
    """
    生成分布

    默认全支撑；sparse 为真时随机挑选一个非空子集作为支撑。
    """
    elements = list(space.elements)
    if sparse:
        size = int(rng.integers(1, len(elements) + 1))
        chosen = sorted(rng.choice(len(elements), size=size, replace=False).tolist())
        elements = [elements[i] for i in chosen]
    weights = _floor_weights(rng, len(elements), mode)
    return Dist(space, dict(zip(elements, weights)))


def random_channel(dom: Space, cod: Space, rng: np.random.Generator,
                   mode: NumericMode = NumericMode.RATIONAL, sparse: bool = False,
                   deterministic: bool = False) -> Channel:
    """
    生成随机信道

    Args:
        dom: 定义域
        cod: 陪域
        rng: 随机数生成器
        mode: 数值模式
        sparse: 各行是否取部分支撑
        deterministic: 是否生成确定性信道（每行都是 Dirac）
    """
    rows = {}
    for x in dom:
        if deterministic:
            y = cod.elements[int(rng.integers(0, len(cod)))]
            one = 1.0 if mode == NumericMode.FLOAT else Fraction(1)
            rows[x] = Dist(cod, {y: one})
        else:
            rows[x] = random_dist(cod, rng, mode, sparse)
    return Channel(dom, cod, rows)


def random_prior_list(space: Space, rng: np.random.Generator, count: int,
                      mode: NumericMode = NumericMode.RATIONAL, sparse: bool = False) -> List[Dist]:
    """逐点比较状态依赖信道时使用的一批采样先验"""
    return [random_dist(space, rng, mode, sparse) for _ in range(count)]


def _scalar(value: Fraction, mode: NumericMode) -> Number:
    return float(value) if mode == NumericMode.FLOAT else value


def random_measure(space: Space, rng: np.random.Generator,
                   mode: NumericMode = NumericMode.RATIONAL, zeros: bool = True) -> Measure:
    """
    生成基测度：整数权重 0..4（zeros 为假时 1..4），至少一个为正
    """
    low = 0 if zeros else 1
    raw = [int(v) for v in rng.integers(low, 5, size=len(space))]
    if not any(raw):
        raw[int(rng.integers(0, len(space)))] = 1
    return Measure(space, {e: _scalar(Fraction(v), mode) for e, v in zip(space, raw)})


def random_effect(space: Space, rng: np.random.Generator,
                  mode: NumericMode = NumericMode.RATIONAL, zeros: bool = True) -> Effect:
    """生成效应：取值 k/4，k 在 0..8（zeros 为假时 1..8）"""
    low = 0 if zeros else 1
    raw = rng.integers(low, 9, size=len(space))
    return Effect(space, {e: _scalar(Fraction(int(v), 4), mode) for e, v in zip(space, raw)})


def random_density_channel(c: Channel, rng: np.random.Generator,
                           mode: NumericMode = NumericMode.RATIONAL) -> DensityChannel:
    """
    为信道 c 生成一个密度表示

    基测度在 c 某一行用到的 y 上取 1..4，其余 y 上可以为 0；
    密度 p(x, y) = c(y|x) / μ(y)，实现出的信道就是 c。
    """
    used = {y for row in c.rows.values() for y in row.support()}
    weights = {}
    for y in c.cod:
        low = 1 if y in used else 0
        weights[y] = _scalar(Fraction(int(rng.integers(low, 5))), mode)
    if not any(weights.values()):
        weights[c.cod.elements[0]] = _scalar(Fraction(1), mode)
    product = ProductSpace.of(c.dom, c.cod)
    values = {
        product.pair(x, y): value / weights[y]
        for x, row in c.rows.items() for y, value in row.items()
    }
    return DensityChannel(Effect(product, values), Measure(c.cod, weights))


def random_partial_dist(space: Space, rng: np.random.Generator,
                        mode: NumericMode = NumericMode.RATIONAL) -> Dist:
    """支撑是真子集的分布（一维空间除外），用于检查支撑外的约定"""
    elements = list(space.elements)
    size = int(rng.integers(1, max(len(elements), 2)))
    chosen = sorted(rng.choice(len(elements), size=size, replace=False).tolist())
    support = [elements[i] for i in chosen]
    return Dist(space, dict(zip(support, _floor_weights(rng, len(support), mode))))
