#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
配置加载模块

优先级：RunConfig 默认值 < 配置文件 run 段 < 环境变量 BLENS_SEED < 命令行参数。
"""

import os
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from models.run_config import RunConfig
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_CONFIG_PATH = "config/config.yaml"
SEED_ENV = "BLENS_SEED"


def load_config(config_path: Optional[str] = DEFAULT_CONFIG_PATH) -> Dict[str, Any]:
    """
    加载 YAML 配置文件

    文件不存在时返回空配置（使用默认值）；格式错误时抛出异常。

    Args:
        config_path: 配置文件路径

    Returns:
        dict: 配置字典
    """
    if not config_path or not os.path.exists(config_path):
        logger.debug(f"配置文件不存在，使用默认配置: {config_path}")
        return {}
    with open(config_path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"配置文件顶层必须是映射: {config_path}")
    return data


def seed_from_env() -> Optional[int]:
    """读取 BLENS_SEED（.env 文件中的值也会被 load_dotenv 载入）"""
    load_dotenv()
    raw = os.getenv(SEED_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw.strip())
    except ValueError:
        raise ValueError(f"环境变量 {SEED_ENV} 不是整数: {raw!r}") from None


def build_run_config(file_config: Optional[Dict[str, Any]] = None, **cli_overrides) -> RunConfig:
    """
    按优先级合并出运行配置

    Args:
        file_config: load_config 的结果
        cli_overrides: 命令行给出的字段，值为 None 表示未指定

    Returns:
        RunConfig: 合并后的配置
    """
    config = RunConfig.from_dict((file_config or {}).get('run'))
    seed = seed_from_env()
    if seed is not None:
        config = config.with_overrides(seed=seed)
    return config.with_overrides(**cli_overrides)
