#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
空间数据模型

有限、有序、带标签的元素集合，即 Kl(D) 的对象。
乘积空间的元素标签编码为 "(a,b)"，嵌套乘积向左结合。
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Optional, Tuple

from models.errors import SpaceMismatch, UnknownElement

UNIT_NAME = "I"
UNIT_ELEMENT = "*"


@dataclass(frozen=True)
class Space:
    """有限空间：名字加上按规范顺序排列的互不相同的元素标签"""
    name: str
    elements: Tuple[str, ...]
    _index: Dict[str, int] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        elements = tuple(str(e) for e in self.elements)
        if not elements:
            raise ValueError(f"空间 {self.name} 至少需要一个元素")
        if len(set(elements)) != len(elements):
            raise ValueError(f"空间 {self.name} 的元素标签有重复: {list(elements)}")
        object.__setattr__(self, 'elements', elements)
        object.__setattr__(self, '_index', {e: i for i, e in enumerate(elements)})

    @classmethod
    def synthesized(cls, name: str, labels: Iterable[str]) -> "Space":
        """合成空间时元素按字典序排列"""
        return cls(name, tuple(sorted(set(str(l) for l in labels))))

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, element) -> bool:
        return element in self._index

    def index(self, element: str) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise UnknownElement(f"元素 {element!r} 不属于空间 {self.name}") from None

    def check(self, element: str) -> str:
        """校验元素属于本空间并原样返回"""
        self.index(element)
        return element

    def to_dict(self):
        return {'name': self.name, 'elements': list(self.elements)}

    @classmethod
    def from_dict(cls, data):
        if 'factors' in data:
            left, right = (Space.from_dict(f) for f in data['factors'])
            return ProductSpace.of(left, right)
        return cls(data['name'], tuple(data['elements']))

    def __str__(self):
        return f"{self.name}{{{', '.join(self.elements)}}}"


def pair_label(a: str, b: str) -> str:
    return f"({a},{b})"


@dataclass(frozen=True)
class ProductSpace(Space):
    """
    乘积空间 X ⊗ Y

    元素是所有有序对，按 (左因子顺序, 右因子顺序) 的字典序排列。
    """
    left: Optional[Space] = None
    right: Optional[Space] = None

    @classmethod
    def of(cls, left: Space, right: Space) -> "ProductSpace":
        elements = tuple(pair_label(a, b) for a in left for b in right)
        return cls(f"{left.name}*{right.name}", elements, left, right)

    @property
    def factors(self) -> Tuple[Space, Space]:
        return self.left, self.right

    def pair(self, a: str, b: str) -> str:
        self.left.check(a)
        self.right.check(b)
        return pair_label(a, b)

    def unpair(self, label: str) -> Tuple[str, str]:
        """由于标签可能嵌套，按下标而不是按逗号拆分"""
        i = self.index(label)
        n = len(self.right)
        return self.left.elements[i // n], self.right.elements[i % n]

    def to_dict(self):
        return {
            'name': self.name,
            'elements': list(self.elements),
            'factors': [self.left.to_dict(), self.right.to_dict()],
        }


UNIT = Space(UNIT_NAME, (UNIT_ELEMENT,))


def product_space(left: Space, right: Space) -> ProductSpace:
    return ProductSpace.of(left, right)


def require_same(expected: Space, actual: Space, what: str = "空间"):
    """
    要求两个空间相同，否则抛出 SpaceMismatch

    Args:
        expected: 期望的空间
        actual: 实际的空间
        what: 出错时描述用的名称
    """
    if expected != actual:
        raise SpaceMismatch(f"{what}不匹配: 期望 {expected}，实际 {actual}")
