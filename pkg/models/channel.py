#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
随机信道数据模型

信道 X ⇸ Y 是 Kleisli 态射：每个定义域元素对应陪域上的一个分布（列随机矩阵）。
本模块提供顺序复合、单子积（张量），以及复制 / 丢弃 / 交换 / 投影这些结构映射。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from models.dist import Dist, dirac, kleisli_extend, total_variation
from models.errors import (CharacterizationMismatch, MissingRow, SpaceMismatch,
                           UnknownElement)
from models.space import (UNIT, UNIT_ELEMENT, ProductSpace, Space,
                          product_space, require_same)
from utils.numeric import TAU_CMP, Number, to_number


@dataclass(frozen=True, eq=False)
class Channel:
    """
    随机信道

    rows[x] 是陪域上的分布；每个定义域元素恰有一行。
    """
    dom: Space
    cod: Space
    rows: Mapping[str, Dist]

    def __post_init__(self):
        for x in self.rows:
            self.dom.check(x)
        missing = [x for x in self.dom if x not in self.rows]
        if missing:
            raise MissingRow(f"信道 {self.dom.name} → {self.cod.name} 缺少行: {missing}")
        for x, row in self.rows.items():
            require_same(self.cod, row.space, f"第 {x} 行的陪域")
        object.__setattr__(self, 'rows', {x: self.rows[x] for x in self.dom})

    def prob(self, y: str, x: str) -> Number:
        """条件概率 c(y|x)"""
        return self.rows[self.dom.check(x)].mass(y)

    @property
    def exact(self) -> bool:
        return all(row.exact for row in self.rows.values())

    def __eq__(self, other):
        if not isinstance(other, Channel):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.rows == other.rows

    __hash__ = None

    def to_matrix(self) -> np.ndarray:
        """浮点矩阵视图：第 i 行是定义域第 i 个元素对应的分布"""
        matrix = np.zeros((len(self.dom), len(self.cod)))
        for i, x in enumerate(self.dom):
            for y, value in self.rows[x].items():
                matrix[i, self.cod.index(y)] = float(value)
        return matrix

    def as_float(self) -> "Channel":
        return Channel(self.dom, self.cod, {x: row.as_float() for x, row in self.rows.items()})

    def to_dict(self):
        return {
            'dom': list(self.dom.elements),
            'cod': list(self.cod.elements),
            'rows': {x: row.to_dict()['masses'] for x, row in self.rows.items()},
        }

    @classmethod
    def from_dict(cls, data, dom: Optional[Space] = None, cod: Optional[Space] = None):
        """
        从字典创建信道，导入时校验随机性

        Args:
            data: {"dom": [...], "cod": [...], "rows": {x: {y: 数值}}}
            dom: 可选的已知定义域（否则按 JSON 中的元素新建名为 dom 的空间）
            cod: 可选的已知陪域
        """
        dom = dom or Space(data.get('dom_name', 'dom'), tuple(data['dom']))
        cod = cod or Space(data.get('cod_name', 'cod'), tuple(data['cod']))
        rows = {
            x: Dist.from_dict({'masses': masses}, cod)
            for x, masses in data['rows'].items()
        }
        return cls(dom, cod, rows)

    def __str__(self):
        lines = [f"{self.dom.name} -> {self.cod.name}"]
        for x, row in self.rows.items():
            lines.append(f"  {x} -> {row}")
        return "\n".join(lines)


def channel_from_table(dom: Space, cod: Space, table: Iterable[Tuple[str, Dist]]) -> Channel:
    """
    由 (定义域元素, 分布) 表构造信道

    Args:
        dom: 定义域
        cod: 陪域
        table: 每个定义域元素恰好一行

    Returns:
        Channel: 校验过的信道
    """
    rows: Dict[str, Dist] = {}
    for x, row in table:
        dom.check(x)
        if x in rows:
            raise SpaceMismatch(f"信道表中元素 {x!r} 出现了两行")
        rows[x] = row
    return Channel(dom, cod, rows)


def identity_channel(space: Space) -> Channel:
    return Channel(space, space, {x: dirac(space, x) for x in space})


def constant_channel(dom: Space, sigma: Dist) -> Channel:
    """每一行都是 sigma 的常值信道"""
    return Channel(dom, sigma.space, {x: sigma for x in dom})


def seq_compose(p: Channel, q: Channel) -> Channel:
    """
    顺序复合 q∘p（Chapman-Kolmogorov 方程）

    (q∘p)(z|x) = Σ_y q(z|y)·p(y|x)

    Args:
        p: 信道 X → Y
        q: 信道 Y → Z

    Returns:
        Channel: 信道 X → Z
    """
    require_same(p.cod, q.dom, "顺序复合的中间空间")
    return Channel(p.dom, q.cod, {x: kleisli_extend(q, row) for x, row in p.rows.items()})


def tensor(f: Channel, g: Channel) -> Channel:
    """
    单子积 f ⊗ g：(f⊗g)((a,b)|(x,y)) = f(a|x)·g(b|y)
    """
    dom = product_space(f.dom, g.dom)
    cod = product_space(f.cod, g.cod)
    rows = {}
    for x in f.dom:
        for y in g.dom:
            masses = {
                cod.pair(a, b): pa * pb
                for a, pa in f.rows[x].items()
                for b, pb in g.rows[y].items()
            }
            rows[dom.pair(x, y)] = Dist(cod, masses)
    return Channel(dom, cod, rows)


def lift_function(dom: Space, cod: Space, fn: Callable[[str], str]) -> Channel:
    """
    将全函数提升为确定性信道：rows[x] = dirac(f(x))

    Raises:
        UnknownElement: f(x) 不在陪域中
    """
    rows = {}
    for x in dom:
        y = fn(x)
        if y not in cod:
            raise UnknownElement(f"函数把 {x!r} 映射到 {y!r}，不属于空间 {cod.name}")
        rows[x] = dirac(cod, y)
    return Channel(dom, cod, rows)


def copy_channel(space: Space) -> Channel:
    """复制 x ↦ |x,x⟩"""
    doubled = product_space(space, space)
    return lift_function(space, doubled, lambda x: doubled.pair(x, x))


def discard_channel(space: Space) -> Channel:
    """丢弃 x ↦ |∗⟩"""
    return lift_function(space, UNIT, lambda x: UNIT_ELEMENT)


def swap_channel(left: Space, right: Space) -> Channel:
    source = product_space(left, right)
    target = product_space(right, left)

    def swap(label):
        a, b = source.unpair(label)
        return target.pair(b, a)

    return lift_function(source, target, swap)


def projection_channel(left: Space, right: Space, which: int) -> Channel:
    """投影 X⊗Y → X（which=1）或 X⊗Y → Y（which=2），即边缘化"""
    source = product_space(left, right)
    if which == 1:
        return lift_function(source, left, lambda label: source.unpair(label)[0])
    if which == 2:
        return lift_function(source, right, lambda label: source.unpair(label)[1])
    raise ValueError(f"投影下标只能是 1 或 2: {which}")


STRUCTURAL_KINDS = ('copy', 'discard', 'swap', 'proj1', 'proj2')


def structural(kind: str, *spaces: Space) -> Channel:
    """
    按名字构造结构映射信道

    Args:
        kind: copy / discard / swap / proj1 / proj2
        spaces: copy、discard 需要一个空间 X；swap、proj1、proj2 需要两个因子空间，
                或者一个乘积空间

    Returns:
        Channel: 对应的确定性信道
    """
    if kind in ('copy', 'discard'):
        if len(spaces) != 1:
            raise SpaceMismatch(f"{kind} 需要恰好一个空间，收到 {len(spaces)} 个")
        return copy_channel(spaces[0]) if kind == 'copy' else discard_channel(spaces[0])
    if kind in ('swap', 'proj1', 'proj2'):
        if len(spaces) == 1 and isinstance(spaces[0], ProductSpace):
            spaces = spaces[0].factors
        if len(spaces) != 2:
            raise SpaceMismatch(f"{kind} 需要两个因子空间或一个乘积空间")
        if kind == 'swap':
            return swap_channel(*spaces)
        return projection_channel(spaces[0], spaces[1], 1 if kind == 'proj1' else 2)
    raise ValueError(f"未知的结构映射: {kind}，可选: {', '.join(STRUCTURAL_KINDS)}")


def push_state(c: Channel, pi: Dist) -> Dist:
    """状态推前 c∘π"""
    return kleisli_extend(c, pi)


def marginal(omega: Dist, which: int) -> Dist:
    """通过投影信道边缘化乘积空间上的联合分布"""
    space = omega.space
    if not isinstance(space, ProductSpace):
        raise SpaceMismatch(f"边缘化需要乘积空间上的分布，实际为 {space.name}")
    return push_state(projection_channel(space.left, space.right, which), omega)


def state_as_channel(pi: Dist) -> Channel:
    """状态 π 看作从单位对象出发的信道 I → X"""
    return Channel(UNIT, pi.space, {UNIT_ELEMENT: pi})


def channel_as_state(c: Channel) -> Dist:
    require_same(UNIT, c.dom, "状态信道的定义域")
    return c.rows[UNIT_ELEMENT]


def channels_equal(c: Channel, d: Channel, tolerance: float = TAU_CMP) -> bool:
    """逐行比较；双方都精确时为精确比较"""
    if c.dom != d.dom or c.cod != d.cod:
        return False
    return all(c.rows[x].approx_equal(d.rows[x], tolerance) for x in c.dom)


def max_row_gap(c: Channel, d: Channel, on: Optional[Iterable[str]] = None) -> Number:
    """在给定元素（默认全部定义域）上的最大逐行全变差"""
    require_same(c.dom, d.dom, "比较信道的定义域")
    require_same(c.cod, d.cod, "比较信道的陪域")
    elements = list(c.dom if on is None else on)
    gaps = [total_variation(c.rows[x], d.rows[x]) for x in elements]
    if not gaps:
        return Fraction(0)
    return max(gaps)


def is_deterministic(c: Channel, tolerance: float = TAU_CMP) -> bool:
    """
    判断信道是否确定

    定义为余幺半群同态方程 copy∘c = (c⊗c)∘copy；快速路径是“每一行都是 Dirac”，
    两者必须一致。
    """
    lhs = seq_compose(c, copy_channel(c.cod))
    rhs = seq_compose(copy_channel(c.dom), tensor(c, c))
    by_equation = channels_equal(lhs, rhs, tolerance)
    if by_equation != rows_are_dirac(c, tolerance):
        raise CharacterizationMismatch(f"确定性判定的两种方法不一致: {c}")
    return by_equation


def rows_are_dirac(c: Channel, tolerance: float = TAU_CMP) -> bool:
    """快速路径：每一行只有一个质量为 1 的点"""
    for row in c.rows.values():
        if row.exact:
            if len(row.masses) != 1:
                return False
        elif max(float(v) for v in row.masses.values()) < 1 - tolerance:
            return False
    return True


def binary_symmetric(eps, space: Optional[Space] = None) -> Channel:
    """
    二元对称信道 BSC(ε)：0 → {0:1-ε, 1:ε}，1 → {0:ε, 1:1-ε}
    """
    space = space or Space("B", ("0", "1"))
    eps = to_number(eps)
    a, b = space.elements
    return Channel(space, space, {
        a: Dist(space, {a: 1 - eps, b: eps}),
        b: Dist(space, {a: eps, b: 1 - eps}),
    })


def associator(left: Space, middle: Space, right: Space) -> Channel:
    """结合子 (X⊗Y)⊗Z → X⊗(Y⊗Z)，只在检查余幺半群结合律时使用"""
    inner = product_space(left, middle)
    source = product_space(inner, right)
    nested = product_space(middle, right)
    target = product_space(left, nested)

    def reassociate(label):
        ab, c = source.unpair(label)
        a, b = inner.unpair(ab)
        return target.pair(a, nested.pair(b, c))

    return lift_function(source, target, reassociate)
