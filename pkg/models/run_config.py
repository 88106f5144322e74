#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
运行配置数据模型
"""

from dataclasses import asdict, dataclass, fields, replace

from utils.numeric import NumericMode

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class RunConfig:
    """随机验证的运行配置"""
    seed: int = 42
    trials: int = 1000
    max_dim: int = 6
    numeric_mode: NumericMode = NumericMode.RATIONAL
    tolerance: float = 1e-9
    format: str = "text"
    workers: int = 1
    sparse: bool = False
    deterministic: bool = False
    # 隐藏的负对照开关：故意破坏反演（只供测试使用）
    corrupt: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'numeric_mode', NumericMode(self.numeric_mode))
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed 必须是 64 位无符号整数: {self.seed}")
        if self.trials < 1:
            raise ValueError(f"trials 必须为正: {self.trials}")
        if not 2 <= self.max_dim <= 16:
            raise ValueError(f"max_dim 必须在 2 到 16 之间: {self.max_dim}")
        if self.tolerance < 0:
            raise ValueError(f"tolerance 不能为负: {self.tolerance}")
        if self.format not in ('text', 'json'):
            raise ValueError(f"format 只能是 text 或 json: {self.format}")
        if self.workers < 1:
            raise ValueError(f"workers 至少为 1: {self.workers}")

    @property
    def exact(self) -> bool:
        return self.numeric_mode == NumericMode.RATIONAL

    def with_overrides(self, **overrides) -> "RunConfig":
        """只覆盖值不为 None 的字段"""
        known = {f.name for f in fields(self)}
        changes = {k: v for k, v in overrides.items() if v is not None and k in known}
        return replace(self, **changes)

    def to_dict(self):
        """报告中回显的配置；workers 不影响结果，因此不回显"""
        data = asdict(self)
        data['numeric_mode'] = self.numeric_mode.value
        data.pop('workers')
        data.pop('corrupt')
        return data

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in (data or {}).items() if k in known})
