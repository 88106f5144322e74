#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
JSON 存储模块

负责模型、信道与报告的 JSON 导入导出。有理数写成 "p/q" 字符串，浮点写成 JSON 数字。
"""

import json
import os
from typing import Any, Dict

from dsl.validator import BoundModel
from models.channel import Channel
from models.errors import BayesLensError, SpaceMismatch
from models.measure import DensityChannel
from models.space import Space
from processors.density import realize_channel
from utils.logger import get_logger


class JsonStore:
    """
    JSON 文件存储

    写入时键顺序固定（与模型中的规范顺序一致），同一内容总是得到同样的字节。
    """

    def __init__(self, indent: int = 2):
        self.indent = indent
        self.logger = get_logger(__name__)

    def dumps(self, data: Dict[str, Any]) -> str:
        return json.dumps(data, ensure_ascii=False, indent=self.indent) + "\n"

    def save(self, data: Dict[str, Any], path: str):
        """
        保存为 JSON 文件

        Args:
            data: 可序列化的字典
            path: 目标路径，目录不存在时自动创建
        """
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.dumps(data))
        self.logger.info(f"已写入 {path}")

    def load(self, path: str) -> Dict[str, Any]:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)


def model_to_dict(model: BoundModel) -> Dict[str, Any]:
    """
    导出已校验的模型：空间、先验、信道表与 let 绑定的复合信道

    Returns:
        dict: 可直接写成 JSON 的字典
    """
    return {
        'numeric_mode': model.mode.value,
        'spaces': {name: space.to_dict() for name, space in model.spaces.items()},
        'priors': {name: prior.to_dict() for name, prior in model.priors.items()},
        'channels': {name: channel.to_dict() for name, channel in model.channels.items()},
        'lets': {name: channel.to_dict() for name, channel in model.lets.items()},
    }


def _space(raw, default_name: str) -> Space:
    if isinstance(raw, dict):
        return Space.from_dict(raw)
    return Space(default_name, tuple(str(label) for label in raw))


def channel_from_document(data: Dict[str, Any]) -> Channel:
    """
    从 JSON 文档读取信道并校验随机性

    文档格式：{"dom": [...], "cod": [...], "rows": {x: {y: "p/q"}}}，
    dom / cod 也可以是 {"name": ..., "elements": [...]}。
    省略 cod 时由各行出现的标签合成（按字典序）。

    Raises:
        SpaceMismatch: 文档缺少 dom / rows，或缺少 cod 时无法合成陪域
        NotNormalized / UnknownElement / MissingRow: 信道本身不合法
    """
    missing = [key for key in ('dom', 'rows') if key not in data]
    if missing:
        raise SpaceMismatch(f"信道文档缺少字段: {missing}")
    if 'cod' in data:
        cod = _space(data['cod'], 'cod')
    else:
        labels = [y for row in data['rows'].values() for y in row]
        if not labels:
            raise SpaceMismatch("信道文档缺少 cod，且各行没有可用于合成陪域的标签")
        cod = Space.synthesized('cod', labels)
    return Channel.from_dict(data, _space(data['dom'], 'dom'), cod)


def density_from_document(data: Dict[str, Any]) -> DensityChannel:
    """
    从 JSON 文档读取密度信道

    文档格式与 DensityChannel.to_dict 一致：
    {"dom": 空间, "cod": 空间, "density": {"(x,y)": 值}, "base": {y: 权重}}
    """
    missing = [key for key in ('dom', 'cod', 'density', 'base') if key not in data]
    if missing:
        raise SpaceMismatch(f"密度信道文档缺少字段: {missing}")
    if not all(isinstance(data[key], dict) for key in ('dom', 'cod')):
        raise SpaceMismatch("密度信道文档的 dom / cod 必须是 {\"name\": ..., \"elements\": [...]}")
    return DensityChannel.from_dict(data)


def import_check(path: str, store: JsonStore = None) -> Channel:
    """
    读取并校验一个信道 JSON 文件；JSON 本身格式错误时包装为 BayesLensError

    带 density 字段的文档按密度信道读取，校验通过后返回它实现出的信道。

    Raises:
        NotCausal: 密度信道实现出的某一行和不为 1
    """
    store = store or JsonStore()
    try:
        data = store.load(path)
    except json.JSONDecodeError as e:
        raise BayesLensError(f"JSON 格式错误（第 {e.lineno} 行第 {e.colno} 列）: {e.msg}") from e
    if not isinstance(data, dict):
        raise SpaceMismatch("信道文档的顶层必须是对象")
    if 'density' in data:
        return realize_channel(density_from_document(data))
    return channel_from_document(data)


