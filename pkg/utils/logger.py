#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
日志工具模块

根日志记录器由 config.yaml 的 logging 段配置。控制台输出写到 stderr，
stdout 只留给命令的结果（文本或 JSON）；file 为空时不写日志文件。
"""

import logging
import os
import sys
from dataclasses import dataclass
from logging.handlers import RotatingFileHandler
from typing import List, Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_configured = False


@dataclass(frozen=True)
class LogSettings:
    """logging 段的取值"""
    level: int = logging.WARNING
    file: Optional[str] = None
    max_size_mb: int = 10
    backup_count: int = 5

    @classmethod
    def from_config(cls, logging_config) -> "LogSettings":
        if not logging_config:
            return cls()
        level_name = str(logging_config.get('level', 'WARNING')).upper()
        return cls(
            level=getattr(logging, level_name, logging.WARNING),
            file=logging_config.get('file'),
            max_size_mb=int(logging_config.get('max_size_mb', cls.max_size_mb)),
            backup_count=int(logging_config.get('backup_count', cls.backup_count)),
        )


class _StderrHandler(logging.StreamHandler):
    """每次写入时取当前的 sys.stderr（测试中 stderr 会被替换）"""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def _handlers(settings: LogSettings) -> List[logging.Handler]:
    handlers: List[logging.Handler] = [_StderrHandler()]
    if settings.file:
        directory = os.path.dirname(settings.file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handlers.append(RotatingFileHandler(
            settings.file,
            maxBytes=settings.max_size_mb * 1024 * 1024,
            backupCount=settings.backup_count,
            encoding='utf-8',
        ))
    formatter = logging.Formatter(LOG_FORMAT)
    for handler in handlers:
        handler.setLevel(settings.level)
        handler.setFormatter(formatter)
    return handlers


def setup_logger(logging_config=None, force=False) -> logging.Logger:
    """
    配置根日志记录器

    Args:
        logging_config: 日志配置字典（level, file, max_size_mb, backup_count）
        force: 已配置过时是否重新配置（CLI 按 --verbose 调整级别时使用）

    Returns:
        logging.Logger: 根日志记录器
    """
    global _configured
    root = logging.getLogger()
    if _configured and not force:
        return root

    settings = LogSettings.from_config(logging_config)
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    root.setLevel(settings.level)
    for handler in _handlers(settings):
        root.addHandler(handler)
    _configured = True
    return root


def get_logger(name=None) -> logging.Logger:
    """
    获取指定名称的日志记录器；根记录器还没有处理器时先按默认值配置

    Args:
        name: 日志记录器名称，通常是 __name__
    """
    if not logging.getLogger().handlers:
        setup_logger()
    return logging.getLogger(name) if name else logging.getLogger()
