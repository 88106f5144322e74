#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
报告输出模块

负责把查询结果与验证报告以文本或 JSON 写到标准输出。
日志走 stderr，这里只写结果本身。
"""

import json
import sys
from typing import Any, Dict, List, TextIO

from models.dist import Dist
from models.report import LawReport, Report


class ReportWriter:
    """
    结果输出器

    JSON 模式下每次输出一个完整的 JSON 文档；键顺序由各模型的 to_dict 决定，
    同样的内容总是得到同样的字节。
    """

    def __init__(self, fmt: str = "text", stream: TextIO = None):
        """
        初始化输出器

        Args:
            fmt: text 或 json
            stream: 输出流，默认 sys.stdout
        """
        if fmt not in ('text', 'json'):
            raise ValueError(f"不支持的输出格式: {fmt}")
        self.fmt = fmt
        self.stream = stream or sys.stdout

    @property
    def is_json(self) -> bool:
        return self.fmt == 'json'

    def _emit(self, text: str):
        self.stream.write(text.rstrip("\n") + "\n")
        self.stream.flush()

    def write_json(self, data: Dict[str, Any]):
        self._emit(json.dumps(data, ensure_ascii=False, indent=2))

    def write_report(self, report: Report):
        if self.is_json:
            self.write_json(report.to_dict())
        else:
            self._emit(report.format_text())

    def write_dist(self, dist: Dist, label: str = "posterior"):
        """
        输出一个分布

        Args:
            dist: 后验或预测分布
            label: JSON 中的键名，文本模式下作为前缀
        """
        if self.is_json:
            self.write_json({label: dist.to_dict()})
        else:
            self._emit(f"{label}: {dist}")

    def write_laws(self, reports: List[LawReport]):
        if self.is_json:
            self.write_json({'laws': [r.to_dict() for r in reports]})
        else:
            self._emit("\n".join(str(r) for r in reports))

    def write_result(self, result):
        """按查询结果的类型选择输出方式"""
        if isinstance(result, Dist):
            self.write_dist(result)
        elif isinstance(result, Report):
            self.write_report(result)
        else:
            self.write_laws(result)

    def write_message(self, message: str, **fields):
        """
        输出简单的状态消息（如 check 的 OK 或诊断）

        JSON 模式下输出 {"message": ..., 其他字段}。
        """
        if self.is_json:
            self.write_json({'message': message, **fields})
        else:
            self._emit(message)
