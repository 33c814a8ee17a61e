"""
命令行接口
==========
子命令：check、equiv、relabel、simulate、invariants。

退出码：0 成功/肯定结论，1 否定结论，2 输入错误，3 运行时缓冲区越界。
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from lsnkit import __version__
from lsnkit.cli import check, equiv, invariants, relabel, simulate
from lsnkit.cli.common import EXIT_FAULT, EXIT_INPUT, attach_list_values
from lsnkit.errors import BufferFault, LsnError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsnkit", description="逻辑同步网络与 bittide 工具箱")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in (check, equiv, relabel, simulate, invariants):
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(attach_list_values(argv))
    try:
        return args.handler(args, out)
    except BufferFault as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except LsnError as exc:
        logger.debug("输入错误", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


__all__ = ["build_parser", "main"]
