"""
逻辑同步网络工具箱
==================
负责加载配置并初始化日志。服务层通过 `current_config()` 读取当前生效的配置，
命令行入口和测试在启动时调用一次 `configure()`。
"""

from __future__ import annotations

import logging
from typing import Optional, Type

from .config import BaseConfig, CONFIG_MAP

__version__ = "0.3.0"

_active_config: Type[BaseConfig] = BaseConfig


def configure(config_name: Optional[str] = None) -> Type[BaseConfig]:
    """
    根据传入的配置名称选择配置类并初始化日志。若未提供配置名称，则使用 BaseConfig。
    """

    global _active_config
    config_class: Type[BaseConfig] = CONFIG_MAP.get(config_name or "", BaseConfig)
    _active_config = config_class

    logging.basicConfig(
        level=getattr(logging, str(config_class.LOG_LEVEL).upper(), logging.INFO),
        format=config_class.LOG_FORMAT,
        force=True,
    )
    logging.getLogger(__name__).debug("使用配置 %s", config_class.__name__)
    return config_class


def current_config() -> Type[BaseConfig]:
    """返回当前生效的配置类。"""

    return _active_config


__all__ = ["configure", "current_config", "__version__"]
