#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
密度函数处理器

有限载体上的密度路线：由效应与基测度实现信道、效应的顺序复合 pμq、
几乎逆，以及通过密度函数计算贝叶斯反演。
"""

from fractions import Fraction
from typing import Dict

from models.channel import Channel
from models.dist import Dist
from models.errors import NotCausal, NotNormalized, SpaceMismatch
from models.lens import BayesLens
from models.measure import DensityChannel, Effect, Measure
from models.space import ProductSpace, Space, require_same
from models.stat_channel import InversionResult, StatChannel
from processors.inversion import posterior_row
from utils.logger import get_logger
from utils.numeric import (TAU_CMP, TAU_NORM, Number, exact_sum, format_number,
                           is_unit_total, values_equal)

logger = get_logger(__name__)


def counting_measure(space: Space) -> Measure:
    return Measure(space, {y: Fraction(1) for y in space})


def density_of(c: Channel) -> DensityChannel:
    """有限信道相对计数测度的标准密度：p(x, y) = c(y|x)"""
    product = ProductSpace.of(c.dom, c.cod)
    values = {product.pair(x, y): v for x, row in c.rows.items() for y, v in row.items()}
    return DensityChannel(Effect(product, values), counting_measure(c.cod))


def realize_channel(dc: DensityChannel) -> Channel:
    """
    实现密度信道：rows[x](y) = p(x, y)·μ(y)

    Raises:
        NotCausal: 某一行的和不为 1
    """
    rows = {}
    for x in dc.dom:
        masses = {y: dc.density.at(x, y) * dc.base.weight(y) for y in dc.cod}
        total = exact_sum(masses.values())
        if not is_unit_total(total, TAU_NORM):
            raise NotCausal(f"密度在 x={x} 处实现出的行和为 {format_number(total)}，不代表因果信道")
        rows[x] = Dist(dc.cod, masses, TAU_NORM)
    return Channel(dc.dom, dc.cod, rows)


def effect_seq(p: Effect, mu: Measure, q: Effect) -> Effect:
    """
    效应的顺序复合：(pμq)(x, z) = Σ_y q(y, z)·μ(y)·p(x, y)

    Args:
        p: X⊗Y 上的效应
        mu: Y 上的测度
        q: Y⊗Z 上的效应

    Returns:
        Effect: X⊗Z 上的效应
    """
    left, right = p.dom, q.dom
    if not isinstance(left, ProductSpace) or not isinstance(right, ProductSpace):
        raise SpaceMismatch("效应复合需要乘积空间上的效应")
    require_same(left.right, mu.space, "效应复合左侧的中间空间")
    require_same(right.left, mu.space, "效应复合右侧的中间空间")
    product = ProductSpace.of(left.left, right.right)
    values: Dict[str, Number] = {}
    for x in left.left:
        for z in right.right:
            total = exact_sum(
                q.at(y, z) * weight * p.at(x, y) for y, weight in mu.weights.items()
            )
            values[product.pair(x, z)] = total
    return Effect(product, values)


def density_compose(first: DensityChannel, second: DensityChannel) -> DensityChannel:
    """复合信道的密度表示：(pμq, ν)"""
    return DensityChannel(effect_seq(first.density, first.base, second.density), second.base)


def almost_inverse(e: Effect, mu: Measure) -> Effect:
    """
    μ-几乎逆：e(y)·μ(y) > 0 处取 1/e(y)，其余处取 0
    """
    require_same(e.dom, mu.space, "几乎逆的测度空间")
    values = {}
    for y in e.dom:
        value = e.value(y)
        if value * mu.weight(y) > 0:
            values[y] = 1 / value
    return Effect(e.dom, values)


def is_almost_inverse(e: Effect, candidate: Effect, mu: Measure, tolerance: float = TAU_CMP) -> bool:
    """
    在 μ 的整个支撑上 e·candidate = 1

    e 在 supp(μ) 的某点为 0 时不存在几乎逆，返回假。
    """
    require_same(e.dom, mu.space, "几乎逆的测度空间")
    return all(values_equal(e.value(y) * candidate.value(y), 1, tolerance) for y in mu.support())


def effects_almost_equal(e: Effect, f: Effect, mu: Measure, tolerance: float = TAU_CMP) -> bool:
    """两个效应在 μ 的支撑上处处相等"""
    require_same(e.dom, f.dom, "效应比较的定义域")
    require_same(e.dom, mu.space, "效应比较的测度空间")
    return all(values_equal(e.value(y), f.value(y), tolerance) for y in mu.support())


def likelihood_effect(dc: DensityChannel, pi: Dist) -> Effect:
    """似然效应 y ↦ Σ_x p(x, y)·π(x)"""
    require_same(dc.dom, pi.space, "似然效应的先验空间")
    values = {
        y: exact_sum(dc.density.at(x, y) * weight for x, weight in pi.items())
        for y in dc.cod
    }
    return Effect(dc.cod, values)


def invert_via_density(dc: DensityChannel, pi: Dist) -> InversionResult:
    """
    通过密度函数计算贝叶斯反演

    row(y)(x) = p⁻¹(y)·p(x, y)·π(x)，p⁻¹ 为似然效应关于基测度的几乎逆；
    预测质量为 0 的 y 行取先验 π（与 invert 相同的约定）。

    Args:
        dc: 信道 c 的密度表示
        pi: 先验

    Returns:
        InversionResult: 反演信道 Y → X
    """
    realize_channel(dc)
    likelihood = likelihood_effect(dc, pi)
    inverse = almost_inverse(likelihood, dc.base)
    rows = {}
    zero_support = []
    for y in dc.cod:
        if likelihood.value(y) * dc.base.weight(y) == 0:
            rows[y] = pi
            zero_support.append(y)
            continue
        masses = {x: inverse.value(y) * dc.density.at(x, y) * weight for x, weight in pi.items()}
        try:
            rows[y] = posterior_row(dc.dom, masses)
        except NotNormalized as e:
            raise NotCausal(f"密度路线在 y={y} 处的后验不归一: {e}") from e
    if zero_support:
        logger.debug(f"密度路线: 观测 {zero_support} 的预测质量为 0，后验取先验")
    return InversionResult(Channel(dc.cod, dc.dom, rows), frozenset(zero_support))


def rescale_base(dc: DensityChannel, y: str, scale: Number) -> DensityChannel:
    """
    基测度重参数化：μ(y) 乘以 s，p(·, y) 除以 s；实现出的信道不变

    Args:
        dc: 密度信道
        y: 被重参数化的陪域元素
        scale: 正的缩放因子
    """
    if scale <= 0:
        raise ValueError(f"缩放因子必须为正: {scale}")
    dc.cod.check(y)
    weights = dict(dc.base.weights)
    if y in weights:
        weights[y] = weights[y] * scale
    product = dc.density.dom
    values = dict(dc.density.values)
    for x in dc.dom:
        label = product.pair(x, y)
        if label in values:
            values[label] = values[label] / scale
    return DensityChannel(Effect(product, values), Measure(dc.base.space, weights))


def density_lens(dc: DensityChannel) -> BayesLens:
    """后向分量走密度路线的精确透镜 ⟨realize(dc), π ↦ invert_via_density(dc, π)⟩"""
    forward = realize_channel(dc)
    backward = StatChannel(
        forward.dom, forward.cod, forward.dom,
        lambda pi: invert_via_density(dc, pi).channel,
        "density-dagger",
    )
    return BayesLens(forward, backward)


def posterior_kernel(dc: DensityChannel, pi: Dist, scale: Effect) -> Effect:
    """
    后验核 (y, x) ↦ scale(y)·p(x, y)·π(x)，定义在 Y⊗X 上

    scale 取似然效应的几乎逆时，核在 scale·μ 的支撑上的各行就是后验分布。
    """
    require_same(dc.cod, scale.dom, "后验核的缩放效应")
    product = ProductSpace.of(dc.cod, dc.dom)
    values = {
        product.pair(y, x): scale.value(y) * dc.density.at(x, y) * weight
        for y in dc.cod for x, weight in pi.items()
    }
    return Effect(product, values)


def measure_joint(mu: Measure, kernel: Effect) -> Effect:
    """μ 与核的联合：(y, x) ↦ μ(y)·k(y, x)"""
    product = kernel.dom
    require_same(product.left, mu.space, "联合的测度空间")
    values = {
        label: mu.weight(product.unpair(label)[0]) * value
        for label, value in kernel.values.items()
    }
    return Effect(product, values)
