#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
概率分布数据模型

有限支撑的概率分布（从单位对象出发的状态 I → X），以及分布单子的运算：
单位 dirac、Kleisli 扩张、凸组合。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Iterable, List, Mapping, Tuple

from models.errors import NegativeMass, NotNormalized, SpaceMismatch
from models.space import Space, product_space, require_same
from utils.numeric import (TAU_CMP, TAU_NORM, Number, exact_sum, is_exact,
                           is_unit_total, number_from_json, number_to_json,
                           to_number, values_equal, format_number)

if TYPE_CHECKING:
    from models.channel import Channel


@dataclass(frozen=True, eq=False)
class Dist:
    """
    有限支撑概率分布

    masses 只保存非零质量，按空间的规范顺序排列；缺失的键表示质量为 0。
    构造时校验：元素属于空间、质量非负、总质量为 1。
    """
    space: Space
    masses: Mapping[str, Number]
    tolerance: float = TAU_NORM

    def __post_init__(self):
        cleaned: Dict[str, Number] = {}
        for element, value in self.masses.items():
            self.space.check(element)
            value = to_number(value)
            if value < 0:
                raise NegativeMass(f"元素 {element!r} 的质量为负: {format_number(value)}")
            if value != 0:
                cleaned[element] = value
        total = exact_sum(cleaned.values())
        if not is_unit_total(total, self.tolerance):
            raise NotNormalized(f"空间 {self.space.name} 上的分布总质量为 {format_number(total)}，不等于 1")
        ordered = {e: cleaned[e] for e in self.space if e in cleaned}
        object.__setattr__(self, 'masses', ordered)

    def mass(self, element: str) -> Number:
        self.space.check(element)
        return self.masses.get(element, self._zero())

    def support(self) -> List[str]:
        return list(self.masses.keys())

    def items(self) -> Iterable[Tuple[str, Number]]:
        return self.masses.items()

    def total(self) -> Number:
        return exact_sum(self.masses.values())

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.masses.values())

    def has_full_support(self) -> bool:
        return len(self.masses) == len(self.space)

    def _zero(self) -> Number:
        return Fraction(0) if self.exact else 0.0

    def approx_equal(self, other: "Dist", tolerance: float = TAU_CMP) -> bool:
        """逐点比较；双方都精确时为精确比较"""
        if self.space != other.space:
            return False
        return all(values_equal(self.mass(e), other.mass(e), tolerance) for e in self.space)

    def __eq__(self, other):
        if not isinstance(other, Dist):
            return NotImplemented
        return self.space == other.space and self.masses == other.masses

    __hash__ = None

    def as_float(self) -> "Dist":
        return Dist(self.space, {e: float(v) for e, v in self.masses.items()})

    def to_dict(self):
        return {
            'space': self.space.name,
            'masses': {e: number_to_json(v) for e, v in self.masses.items()},
        }

    @classmethod
    def from_dict(cls, data, space: Space):
        """
        从字典创建分布

        Args:
            data: {"space": 名字, "masses": {元素: 数值}}
            space: 已知的空间对象（JSON 中只有空间名）
        """
        if data.get('space') not in (None, space.name):
            raise SpaceMismatch(f"分布声明的空间 {data.get('space')} 与 {space.name} 不一致")
        return cls(space, {e: number_from_json(v) for e, v in data.get('masses', {}).items()})

    def __str__(self):
        body = ", ".join(f"{e}: {format_number(v)}" for e, v in self.masses.items())
        return f"{{{body}}}"


def make_dist(space: Space, masses: Iterable[Tuple[str, Number]], tolerance: float = TAU_NORM) -> Dist:
    """
    由 (元素, 质量) 列表构造分布

    重复出现的元素质量相加；零质量不保存。

    Args:
        space: 空间
        masses: (元素, 质量) 列表
        tolerance: 浮点模式下的归一化容差

    Returns:
        Dist: 校验过的分布
    """
    accumulated: Dict[str, Number] = {}
    for element, value in masses:
        space.check(element)
        value = to_number(value)
        if value < 0:
            raise NegativeMass(f"元素 {element!r} 的质量为负: {format_number(value)}")
        accumulated[element] = accumulated.get(element, 0) + value
    return Dist(space, accumulated, tolerance)


def dirac(space: Space, element: str) -> Dist:
    """单子的单位：在 element 处质量为 1 的 Dirac 分布"""
    space.check(element)
    return Dist(space, {element: Fraction(1)})


def uniform(space: Space) -> Dist:
    weight = Fraction(1, len(space))
    return Dist(space, {e: weight for e in space})


def convex_mix(weights: Iterable[Tuple[Number, Dist]], tolerance: float = TAU_NORM) -> Dist:
    """
    凸组合 Σ w_i · d_i

    Args:
        weights: (权重, 分布) 列表，分布须在同一空间上，权重非负且和为 1

    Returns:
        Dist: 逐点加权和
    """
    weights = [(to_number(w), d) for w, d in weights]
    if not weights:
        raise NotNormalized("凸组合至少需要一个分量")
    space = weights[0][1].space
    for w, d in weights:
        require_same(space, d.space, "凸组合的分布空间")
        if w < 0:
            raise NegativeMass(f"凸组合权重为负: {format_number(w)}")
    total = exact_sum(w for w, _ in weights)
    if not is_unit_total(total, tolerance):
        raise NotNormalized(f"凸组合权重之和为 {format_number(total)}，不等于 1")
    masses: Dict[str, Number] = {}
    for w, d in weights:
        for element, value in d.items():
            masses[element] = masses.get(element, 0) + w * value
    return Dist(space, masses, tolerance)


def kleisli_extend(q: "Channel", rho: Dist) -> Dist:
    """
    Kleisli 扩张 q^▷(ρ) = Σ_z (Σ_y q(z|y)·ρ(y)) |z⟩

    Args:
        q: 信道 Y → Z
        rho: Y 上的分布

    Returns:
        Dist: Z 上的分布
    """
    require_same(q.dom, rho.space, "Kleisli 扩张的输入空间")
    masses: Dict[str, Number] = {}
    for y, weight in rho.items():
        for z, value in q.rows[y].items():
            masses[z] = masses.get(z, 0) + value * weight
    return Dist(q.cod, masses)


def product_dist(left: Dist, right: Dist) -> Dist:
    """乘积状态 p × q，定义在 X ⊗ Y 上"""
    space = product_space(left.space, right.space)
    masses = {
        space.pair(a, b): pa * pb
        for a, pa in left.items()
        for b, pb in right.items()
    }
    return Dist(space, masses)


def total_variation(p: Dist, q: Dist) -> Number:
    """全变差距离：L1 距离的一半"""
    require_same(p.space, q.space, "全变差的分布空间")
    return exact_sum(abs(p.mass(e) - q.mass(e)) for e in p.space) / 2
