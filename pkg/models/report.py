#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
报告数据模型

定义透镜定律报告、复合定理报告以及命令行验证报告的数据结构。
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from models.channel import Channel
from models.dist import Dist
from utils.numeric import (TAU_CMP, Number, format_number, is_exact,
                           number_to_json)

LAWS = ('GetPut', 'PutGet', 'PutPut')

# 报告中最多保留的见证个数（按试验下标取最前面的）
MAX_WITNESSES = 5


@dataclass
class Witness:
    """定律失败（或反例）的见证：输入、左右两侧分布与全变差差距"""
    inputs: Dict[str, Any]
    lhs: Dist
    rhs: Dist
    gap: Number

    def to_dict(self):
        return {
            'inputs': self.inputs,
            'lhs': self.lhs.to_dict(),
            'rhs': self.rhs.to_dict(),
            'gap': number_to_json(self.gap),
        }


@dataclass
class LawReport:
    """透镜定律检查结果"""
    law: str
    holds: bool
    witness: Optional[Witness] = None
    gap: Number = 0
    trials: int = 0
    note: str = ""
    # 判定 holds 时使用的比较容差
    tolerance: float = TAU_CMP

    def __post_init__(self):
        if self.law not in LAWS:
            raise ValueError(f"未知的透镜定律: {self.law}")
        if not self.holds and self.witness is not None:
            gap = self.witness.gap
            limit = 0 if is_exact(gap) else self.tolerance
            if gap <= limit:
                raise ValueError(f"{self.law} 不成立时见证差距必须大于 {limit}")

    def to_dict(self):
        return {
            'law': self.law,
            'holds': self.holds,
            'gap': number_to_json(self.gap),
            'trials': self.trials,
            'note': self.note,
            'witness': self.witness.to_dict() if self.witness else None,
        }

    def __str__(self):
        status = "成立" if self.holds else "不成立"
        text = f"{self.law}: {status}，差距 {format_number(self.gap)}"
        if self.note:
            text += f"（{self.note}）"
        return text


@dataclass
class CompositionReport:
    """复合定理在单个 (c, d, π) 上的检查结果"""
    holds: bool
    max_gap: Number
    lhs: Channel
    rhs: Channel
    support: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            'holds': self.holds,
            'max_gap': number_to_json(self.max_gap),
            'support': self.support,
            'lhs': self.lhs.to_dict(),
            'rhs': self.rhs.to_dict(),
        }


@dataclass
class Report:
    """
    命令行报告

    相同配置重复运行时，除 wall_clock 外的内容逐字节一致。
    """
    command: str
    config: Dict[str, Any]
    passed: int = 0
    failed: int = 0
    max_gap: Number = 0
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    sections: Dict[str, Any] = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def ok(self) -> bool:
        """主计数与各小节的 failed 计数都为 0"""
        if self.failed:
            return False
        return all(not s.get('failed') for s in self.sections.values() if isinstance(s, dict))

    def record(self, holds: bool, gap: Number = 0, witness: Optional[Dict[str, Any]] = None):
        """
        记录一次试验结果

        Args:
            holds: 是否通过
            gap: 该次试验的差距
            witness: 失败时的见证，最多保留 MAX_WITNESSES 个
        """
        if holds:
            self.passed += 1
        else:
            self.failed += 1
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)
        if gap > self.max_gap:
            self.max_gap = gap

    def to_dict(self, include_wall_clock: bool = True):
        data = {
            'command': self.command,
            'config': self.config,
            'passed': self.passed,
            'failed': self.failed,
            'max_gap': number_to_json(self.max_gap),
            'witnesses': self.witnesses,
            'sections': self.sections,
        }
        if include_wall_clock:
            data['wall_clock'] = round(self.wall_clock, 3)
        return data

    def format_text(self) -> str:
        """
        生成文本报告

        Returns:
            str: 多行文本
        """
        lines = [
            f"命令: {self.command}",
            f"配置: " + ", ".join(f"{k}={v}" for k, v in self.config.items()),
            f"通过: {self.passed}  失败: {self.failed}  最大差距: {format_number(self.max_gap)}",
        ]
        for name, section in self.sections.items():
            if isinstance(section, dict):
                summary = ", ".join(f"{k}={v}" for k, v in section.items() if not isinstance(v, (dict, list)))
                lines.append(f"[{name}] {summary}")
            else:
                lines.append(f"[{name}] {section}")
        if self.witnesses:
            lines.append(f"见证（共 {len(self.witnesses)} 个，显示第一个）:")
            lines.append(f"  {self.witnesses[0]}")
        lines.append(f"用时: {self.wall_clock:.3f} 秒")
        lines.append("结果: 通过" if self.ok else "结果: 失败")
        return "\n".join(lines)
