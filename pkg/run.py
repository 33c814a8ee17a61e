"""
命令行启动入口
==============
根据环境变量选择配置，初始化日志后把参数交给 lsnkit 命令行。

    python run.py check networks/triangle.json
"""

from __future__ import annotations

import os
import sys

from lsnkit import configure
from lsnkit.cli import main


def _detect_config_name() -> str:
    """
    根据 LSNKIT_ENV / APP_ENV 环境变量自动选择配置名称。
    """

    return os.getenv("LSNKIT_ENV") or os.getenv("APP_ENV") or "production"


if __name__ == "__main__":
    configure(_detect_config_name())
    sys.exit(main())
