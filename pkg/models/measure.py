#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
测度与效应数据模型

有限载体上的基测度（不要求归一化）、效应（非负函数，即密度函数），
以及由 (密度, 基测度) 表示的信道。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from models.errors import NegativeMass, SpaceMismatch
from models.space import ProductSpace, Space
from utils.numeric import (Number, format_number, is_exact, number_from_json,
                           number_to_json, to_number)


def _clean(space: Space, values: Mapping[str, Number], what: str) -> dict:
    cleaned = {}
    for element, value in values.items():
        space.check(element)
        value = to_number(value)
        if value < 0:
            raise NegativeMass(f"{what}在 {element!r} 处取负值: {format_number(value)}")
        if value != 0:
            cleaned[element] = value
    return {e: cleaned[e] for e in space if e in cleaned}


@dataclass(frozen=True, eq=False)
class Measure:
    """有限基测度：非负权重，至少一个为正"""
    space: Space
    weights: Mapping[str, Number]

    def __post_init__(self):
        cleaned = _clean(self.space, self.weights, "测度")
        if not cleaned:
            raise NegativeMass(f"空间 {self.space.name} 上的测度没有正权重")
        object.__setattr__(self, 'weights', cleaned)

    def weight(self, element: str) -> Number:
        self.space.check(element)
        return self.weights.get(element, Fraction(0))

    def support(self):
        return list(self.weights.keys())

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.weights.values())

    def __eq__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return self.space == other.space and self.weights == other.weights

    __hash__ = None

    def to_dict(self):
        return {'space': self.space.name,
                'weights': {e: number_to_json(v) for e, v in self.weights.items()}}

    @classmethod
    def from_dict(cls, data, space: Space):
        return cls(space, {e: number_from_json(v) for e, v in data.get('weights', {}).items()})


@dataclass(frozen=True, eq=False)
class Effect:
    """效应：定义域上的非负函数，没有上界，也不要求归一化"""
    dom: Space
    values: Mapping[str, Number]

    def __post_init__(self):
        object.__setattr__(self, 'values', _clean(self.dom, self.values, "效应"))

    def value(self, element: str) -> Number:
        self.dom.check(element)
        return self.values.get(element, Fraction(0))

    def at(self, x: str, y: str) -> Number:
        """乘积空间上的效应在 (x, y) 处的取值"""
        if not isinstance(self.dom, ProductSpace):
            raise SpaceMismatch(f"效应的定义域 {self.dom.name} 不是乘积空间")
        return self.value(self.dom.pair(x, y))

    def __eq__(self, other):
        if not isinstance(other, Effect):
            return NotImplemented
        return self.dom == other.dom and self.values == other.values

    __hash__ = None

    def to_dict(self):
        return {'dom': self.dom.name,
                'values': {e: number_to_json(v) for e, v in self.values.items()}}

    @classmethod
    def from_dict(cls, data, dom: Space):
        return cls(dom, {e: number_from_json(v) for e, v in data.get('values', {}).items()})


@dataclass(frozen=True)
class DensityChannel:
    """
    由密度 p（X⊗Y 上的效应）与基测度 μ（Y 上）表示的信道

    实现出的行是 p(x, y)·μ(y)；每一行的和必须为 1，否则不代表因果信道。
    """
    density: Effect
    base: Measure

    def __post_init__(self):
        if not isinstance(self.density.dom, ProductSpace):
            raise SpaceMismatch(f"密度的定义域必须是乘积空间 X⊗Y，实际为 {self.density.dom.name}")
        if self.density.dom.right != self.base.space:
            raise SpaceMismatch(
                f"密度的第二个因子 {self.density.dom.right.name} 与基测度空间 {self.base.space.name} 不一致"
            )

    @property
    def dom(self) -> Space:
        return self.density.dom.left

    @property
    def cod(self) -> Space:
        return self.density.dom.right

    def to_dict(self):
        product = self.density.dom
        return {
            'dom': product.left.to_dict(),
            'cod': product.right.to_dict(),
            'density': self.density.to_dict()['values'],
            'base': self.base.to_dict()['weights'],
        }

    @classmethod
    def from_dict(cls, data):
        dom = Space.from_dict(data['dom'])
        cod = Space.from_dict(data['cod'])
        product = ProductSpace.of(dom, cod)
        density = Effect.from_dict({'values': data['density']}, product)
        base = Measure.from_dict({'weights': data['base']}, cod)
        return cls(density, base)
