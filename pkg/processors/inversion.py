#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
贝叶斯反演处理器

相对先验的贝叶斯反演、贝叶斯关系检查、几乎相等，以及状态索引纤维 Stat(X)
上的复合与拉回。
"""

import math
from typing import Dict, Iterable, Tuple

from models.channel import (Channel, copy_channel, identity_channel,
                            push_state, seq_compose, swap_channel, tensor)
from models.dist import Dist
from models.errors import (CharacterizationMismatch, EmptyPushforward,
                           NotNormalized, SpaceMismatch)
from models.space import ProductSpace, require_same
from models.stat_channel import InversionResult, StatChannel
from utils.logger import get_logger
from utils.numeric import TAU_CMP, TAU_NORM, Number, is_exact

logger = get_logger(__name__)


def invert(c: Channel, pi: Dist) -> InversionResult:
    """
    计算 c 相对先验 π 的贝叶斯反演 c†_π

    对 (c∘π)(y) > 0 的 y：row(y)(x) = c(y|x)·π(x) / (c∘π)(y)；
    对质量为 0 的 y：row(y) = π。

    Args:
        c: 信道 X → Y
        pi: X 上的先验

    Returns:
        InversionResult: 反演信道 Y → X 及零支撑记录
    """
    require_same(c.dom, pi.space, "反演的先验空间")
    predicted = push_state(c, pi)
    if not predicted.masses:
        raise EmptyPushforward(f"推前分布 {c.cod.name} 没有支撑", predicted=predicted)

    rows: Dict[str, Dist] = {}
    zero_support = []
    for y in c.cod:
        evidence = predicted.mass(y)
        if evidence == 0:
            rows[y] = pi
            zero_support.append(y)
            continue
        masses = {x: c.prob(y, x) * weight / evidence for x, weight in pi.items()}
        rows[y] = posterior_row(c.dom, masses)

    if zero_support:
        logger.debug(f"观测 {zero_support} 的预测质量为 0，后验取先验")
    return InversionResult(Channel(c.cod, c.dom, rows), frozenset(zero_support))


def posterior_row(space, masses: Dict[str, Number]) -> Dist:
    """有理数模式下后验行必须精确归一；浮点模式下除以总和重新归一，归一化因子与 1 的偏差不超过 TAU_NORM"""
    if all(is_exact(v) for v in masses.values()):
        return Dist(space, masses)
    total = math.fsum(float(v) for v in masses.values())
    if abs(total - 1.0) > TAU_NORM:
        raise NotNormalized(f"后验行重新归一化因子 {total!r} 偏离 1 超过 {TAU_NORM}")
    return Dist(space, {x: float(v) / total for x, v in masses.items()})


def joint_state(pi: Dist, c: Channel) -> Dist:
    """
    联合状态 (id⊗c)∘copy∘π，定义在 X⊗Y 上

    直接用结构信道搭出来，与图形演算中的写法一一对应。
    """
    require_same(c.dom, pi.space, "联合状态的先验空间")
    pipeline = seq_compose(copy_channel(c.dom), tensor(identity_channel(c.dom), c))
    return push_state(pipeline, pi)


def satisfies_bayes_relation(c: Channel, pi: Dist, k: Channel, tolerance: float = TAU_CMP) -> bool:
    """
    检查 k 是否为 c 相对 π 的贝叶斯反演

    即 (id⊗c)∘copy∘π 与 (k⊗id)∘copy∘(c∘π) 作为 X⊗Y 上的分布相等。

    Args:
        c: 信道 X → Y
        pi: X 上的先验
        k: 候选反演 Y → X
        tolerance: 浮点比较容差

    Returns:
        bool: 联合分布是否相等
    """
    require_same(c.dom, pi.space, "贝叶斯关系的先验空间")
    require_same(c.cod, k.dom, "候选反演的定义域")
    require_same(c.dom, k.cod, "候选反演的陪域")
    lhs = joint_state(pi, c)
    predicted = push_state(c, pi)
    backward = seq_compose(copy_channel(c.cod), tensor(k, identity_channel(c.cod)))
    rhs = push_state(backward, predicted)
    return lhs.approx_equal(rhs, tolerance)


def almost_equal(f: Channel, g: Channel, pi: Dist, tolerance: float = TAU_CMP) -> bool:
    """
    π-几乎相等

    两种刻画同时计算：联合分布 (id⊗f)∘copy∘π 与 (id⊗g)∘copy∘π 相等；
    以及在 π 的支撑上逐行相等。两者不一致时抛出 CharacterizationMismatch。
    """
    require_same(f.dom, g.dom, "几乎相等比较的定义域")
    require_same(f.cod, g.cod, "几乎相等比较的陪域")
    require_same(f.dom, pi.space, "几乎相等的参考状态空间")
    by_joint = joint_state(pi, f).approx_equal(joint_state(pi, g), tolerance)
    by_rows = all(f.rows[x].approx_equal(g.rows[x], tolerance) for x in pi.support())
    if by_joint != by_rows:
        message = f"几乎相等的两种刻画不一致: 联合分布={by_joint}，支撑上逐行={by_rows}"
        if f.exact and g.exact and pi.exact:
            raise CharacterizationMismatch(message)
        # 浮点模式下 π(x) 很小时两种容差口径不同，以联合分布为准
        logger.warning(message)
    return by_joint


def disintegrate(omega: Dist) -> Tuple[Dist, Channel]:
    """
    乘积法则形式的贝叶斯：把 X⊗Y 上的联合状态分解为 X 的边缘和条件信道 X → Y

    边缘质量为 0 的 x 行取 Y 上的边缘（与 invert 的约定一致）。

    Returns:
        tuple: (X 上的边缘分布, 条件信道 X → Y)
    """
    space = omega.space
    if not isinstance(space, ProductSpace):
        raise SpaceMismatch(f"分解需要乘积空间上的联合分布，实际为 {space.name}")
    left, right = space.factors
    first: Dict[str, Number] = {}
    second: Dict[str, Number] = {}
    for label, value in omega.items():
        a, b = space.unpair(label)
        first[a] = first.get(a, 0) + value
        second[b] = second.get(b, 0) + value
    marginal_x = Dist(left, first)
    marginal_y = Dist(right, second)
    rows = {}
    for a in left:
        weight = marginal_x.mass(a)
        if weight == 0:
            rows[a] = marginal_y
            continue
        masses = {b: omega.mass(space.pair(a, b)) / weight for b in right}
        rows[a] = posterior_row(right, masses)
    return marginal_x, Channel(left, right, rows)


def invert_by_disintegration(c: Channel, pi: Dist) -> Channel:
    """交换联合状态 (id⊗c)∘copy∘π 的因子后再分解，得到另一条反演路径"""
    omega = joint_state(pi, c)
    swapped = push_state(swap_channel(c.dom, c.cod), omega)
    _, channel = disintegrate(swapped)
    return channel


def constant_stat(channel: Channel, index_space, label: str = "") -> StatChannel:
    """不依赖索引状态的常值状态依赖信道"""
    return StatChannel(index_space, channel.dom, channel.cod, lambda _prior: channel,
                       label or "const")


def stat_identity(index_space, space) -> StatChannel:
    """Stat(X) 中的恒等态射 ρ ↦ id_A"""
    identity = identity_channel(space)
    return StatChannel(index_space, space, space, lambda _prior: identity, "id")


def stat_pullback(c: Channel, alpha: StatChannel) -> StatChannel:
    """
    沿前向信道 c: Y → X 拉回：result(ρ) = α(c∘ρ)

    Args:
        c: 信道 Y → X
        alpha: 以 X 为索引的状态依赖信道

    Returns:
        StatChannel: 以 Y 为索引的状态依赖信道
    """
    require_same(c.cod, alpha.index_space, "拉回信道的陪域")
    return StatChannel(
        c.dom, alpha.dom, alpha.cod,
        lambda rho: alpha(push_state(c, rho)),
        f"{alpha.label}*",
    )


def stat_compose(alpha: StatChannel, beta: StatChannel) -> StatChannel:
    """
    纤维内逐点复合：(β∘α)(ρ) = β(ρ)∘α(ρ)

    Args:
        alpha: StatChannel(X; A, B)
        beta: StatChannel(X; B, C)

    Returns:
        StatChannel: StatChannel(X; A, C)
    """
    require_same(alpha.index_space, beta.index_space, "纤维复合的索引空间")
    require_same(alpha.cod, beta.dom, "纤维复合的中间空间")
    return StatChannel(
        alpha.index_space, alpha.dom, beta.cod,
        lambda rho: seq_compose(alpha(rho), beta(rho)),
        f"{beta.label}.{alpha.label}",
    )


def stat_agree_at(alpha: StatChannel, beta: StatChannel, priors: Iterable[Dist],
                  tolerance: float = TAU_CMP) -> bool:
    """在给定的索引状态上逐点比较两个状态依赖信道"""
    for rho in priors:
        left, right = alpha(rho), beta(rho)
        if left.dom != right.dom or left.cod != right.cod:
            return False
        for x in left.dom:
            if not left.rows[x].approx_equal(right.rows[x], tolerance):
                return False
    return True

