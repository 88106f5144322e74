#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
数值工具模块

两种数值模式：有理数模式（fractions.Fraction，精确，所有定理检查默认在此模式下运行）
和浮点模式（64 位浮点，配合容差比较）。
"""

import math
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Number = Union[Fraction, float]

# 浮点模式下的归一化容差与比较容差
TAU_NORM = 1e-9
TAU_CMP = 1e-9


class NumericMode(str, Enum):
    """数值模式"""
    RATIONAL = "rational"
    FLOAT = "float"


def is_exact(value) -> bool:
    """判断数值是否为精确有理数（int 也算）"""
    return isinstance(value, Rational) and not isinstance(value, bool)


def to_number(value, mode: NumericMode = None) -> Number:
    """
    将输入转换为当前模式下的数值

    Args:
        value: int / Fraction / float / 字符串
        mode: 目标模式；为空时保持原有精度（int 转为 Fraction）

    Returns:
        Number: Fraction 或 float
    """
    if isinstance(value, str):
        return parse_number(value, mode or NumericMode.RATIONAL)
    if isinstance(value, bool):
        raise TypeError(f"不支持布尔值作为概率: {value!r}")
    if mode == NumericMode.FLOAT:
        return float(value)
    if is_exact(value):
        return Fraction(value)
    if mode == NumericMode.RATIONAL:
        # 浮点数在有理数模式下按其最短十进制表示精确化
        return Fraction(repr(float(value)))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"不支持非有限数值: {value!r}")
        return value
    return float(value)


def parse_number(text: str, mode: NumericMode = NumericMode.RATIONAL) -> Number:
    """
    解析数字文本

    支持 ``p/q`` 形式的有理数和十进制小数；有理数模式下小数按精确十进制分数解析。

    Args:
        text: 数字文本
        mode: 数值模式

    Returns:
        Number: 解析后的数值
    """
    text = text.strip()
    if mode == NumericMode.FLOAT:
        if '/' in text:
            num, den = text.split('/', 1)
            return float(num) / float(den)
        return float(text)
    return Fraction(text)


def format_number(value: Number) -> str:
    """有理数输出为 p/q（整数不带分母），浮点数输出最短往返表示"""
    if is_exact(value):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def number_to_json(value: Number):
    """JSON 表示：有理数为 "p/q" 字符串，浮点为 JSON 数字"""
    if is_exact(value):
        return format_number(value)
    return float(value)


def number_from_json(raw) -> Number:
    if isinstance(raw, str):
        return Fraction(raw)
    if isinstance(raw, int) and not isinstance(raw, bool):
        return Fraction(raw)
    return float(raw)


def values_equal(a: Number, b: Number, tolerance: float = TAU_CMP) -> bool:
    """两个数都精确时做精确比较，否则在容差内比较"""
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tolerance


def is_unit_total(total: Number, tolerance: float = TAU_NORM) -> bool:
    """判断总质量是否为 1"""
    return values_equal(total, Fraction(1), tolerance)


def exact_sum(values: Iterable[Number]) -> Number:
    """求和；全为有理数时保持精确，否则使用 math.fsum"""
    values = list(values)
    if all(is_exact(v) for v in values):
        return sum((Fraction(v) for v in values), Fraction(0))
    return math.fsum(float(v) for v in values)
