"""
工具箱配置文件
==================
该模块集中管理所有环境共享的配置项：日志级别、相位容差，以及 bittide
仿真在网络文件未给出时使用的默认参数。通过环境变量（或 .env 文件）可以
覆盖这些默认值，从而在不同的实验环境中保持一致的配置体验。
"""

from __future__ import annotations

import os
from typing import Dict, Type

from dotenv import load_dotenv

# 立即加载 .env，方便在本地实验阶段直接覆盖默认配置。
load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, str(default)))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


class BaseConfig:
    """
    通用配置：日志、数值容差和 bittide 控制器默认值，适用于所有环境。
    """

    LOG_LEVEL = os.getenv("LSNKIT_LOG_LEVEL", "INFO")
    LOG_FORMAT = os.getenv(
        "LSNKIT_LOG_FORMAT", "%(asctime)s %(levelname)s [%(name)s] %(message)s"
    )

    # 相位与整数 tick 的距离小于该值时视为恰好落在 tick 上（右连续取整）。
    PHASE_TOLERANCE = _env_float("LSNKIT_PHASE_TOLERANCE", 1e-9)

    # check 命令做扩展图无环抽查时使用的窗口半宽（localticks）。
    WINDOW_SPOT_CHECK = _env_int("LSNKIT_WINDOW_SPOT_CHECK", 8)

    NOMINAL_FREQ = _env_float("LSNKIT_NOMINAL_FREQ", 1e6)
    SETPOINT = _env_int("LSNKIT_SETPOINT", 8)
    GAIN = _env_float("LSNKIT_GAIN", 2e-3)
    CONTROL_PERIOD = _env_int("LSNKIT_CONTROL_PERIOD", 1000)
    FREQ_BOUND_PPM = _env_float("LSNKIT_FREQ_BOUND_PPM", 500.0)
    HORIZON_TICKS = _env_int("LSNKIT_HORIZON_TICKS", 100_000)
    OBSERVE_MODE = os.getenv("LSNKIT_OBSERVE_MODE", "mean")
    TRACE_MODE = os.getenv("LSNKIT_TRACE_MODE", "full")


class DevelopmentConfig(BaseConfig):
    """开发环境配置，默认输出调试日志。"""

    LOG_LEVEL = os.getenv("LSNKIT_LOG_LEVEL", "DEBUG")


class TestingConfig(BaseConfig):
    """测试环境配置，只保留警告以上的日志，仿真默认只记录控制事件。"""

    LOG_LEVEL = os.getenv("LSNKIT_LOG_LEVEL", "WARNING")
    TRACE_MODE = "control"


class ProductionConfig(BaseConfig):
    """批量实验配置，保持最少的默认输出。"""

    LOG_LEVEL = os.getenv("LSNKIT_LOG_LEVEL", "WARNING")


CONFIG_MAP: Dict[str, Type[BaseConfig]] = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
}
