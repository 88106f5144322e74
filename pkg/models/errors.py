#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
异常定义

库代码只负责抛出这些异常，命令行层捕获后转换成退出码。
"""

from typing import Optional, Sequence


class BayesLensError(Exception):
    """所有库异常的基类"""


class NotNormalized(BayesLensError):
    """总质量不为 1（有理数模式精确比较，浮点模式在容差内比较）"""


class UnknownElement(BayesLensError):
    """元素不属于给定空间"""


class NegativeMass(BayesLensError):
    """出现负的概率质量或负权重"""


class SpaceMismatch(BayesLensError):
    """组合时两端空间不一致"""


class MissingRow(BayesLensError):
    """信道表缺少某个定义域元素的行"""


class EmptyPushforward(BayesLensError):
    """
    推前分布没有支撑，或观测点的预测质量为 0

    predicted 字段保存预测分布，便于命令行打印。
    """

    def __init__(self, message, predicted=None):
        super().__init__(message)
        self.predicted = predicted


class NotCausal(BayesLensError):
    """密度与基测度实现出来的行和不为 1"""


class NotFound(BayesLensError):
    """反例搜索在试验预算内没有找到见证"""


class CharacterizationMismatch(BayesLensError):
    """几乎相等的两种刻画（联合分布相等 / 支撑上逐行相等）给出不同结论"""


class ModelSyntaxError(BayesLensError):
    """模型文件语法错误，带行列号与期望的记号"""

    def __init__(self, message, line: int, column: int, expected: Optional[Sequence[str]] = None):
        self.line = line
        self.column = column
        self.expected = sorted(expected or [])
        detail = f"第 {line} 行第 {column} 列: {message}"
        if self.expected:
            detail += f"（期望: {', '.join(self.expected)}）"
        super().__init__(detail)


class DuplicateName(BayesLensError):
    """同一类声明中名字重复"""


class ForwardReference(BayesLensError):
    """引用了尚未声明的名字"""


class ValidationError(BayesLensError):
    """
    模型校验失败

    包装库异常（NotNormalized、SpaceMismatch、UnknownElement 等），并附上源码位置。
    """

    def __init__(self, cause: BayesLensError, line: int = 0, column: int = 0):
        self.cause = cause
        self.line = line
        self.column = column
        super().__init__(f"第 {line} 行第 {column} 列: {type(cause).__name__}: {cause}")
