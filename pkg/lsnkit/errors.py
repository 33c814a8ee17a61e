"""
错误类型
========
所有领域错误都继承自 ValueError，调用方沿用 `except ValueError` 即可统一处理；
缓冲区故障单独成类，命令行据此返回不同的退出码。
"""

from __future__ import annotations

from typing import Any, Optional


class LsnError(ValueError):
    """工具箱内所有输入/前置条件错误的基类。"""


class InvalidGraph(LsnError):
    """自环、重复边、重复节点或未声明的端点。"""


class Disconnected(LsnError):
    """对应的无向图不连通。"""


class NotStronglyConnected(LsnError):
    """有向图不是强连通的。"""


class NotAPath(LsnError):
    """给定的节点序列不是有向路径。"""


class NotACycle(LsnError):
    """给定的节点序列不是（有向或无向意义下的）环。"""


class PreconditionViolated(LsnError):
    """操作的前置条件不成立，例如存在非正的有向环。"""


class GraphMismatch(LsnError):
    """两个网络的底层有向图不同。"""


class NegativeCycle(LsnError):
    """存在逻辑时延之和为负的有向环。"""

    def __init__(self, message: str, cycle: Optional[list] = None):
        super().__init__(message)
        self.cycle = cycle


class NegativeLatency(LsnError):
    """同步实现要求所有逻辑时延非负。"""


class BadHorizon(LsnError):
    """仿真/检查时间区间无效。"""


class InsufficientData(LsnError):
    """轨迹中的数据不足以得出结论。"""


class LatencyNotConstant(LsnError):
    """同一条边上两帧的逻辑时延不同。"""

    def __init__(self, message: str, first: Any = None, other: Any = None):
        super().__init__(message)
        self.first = first
        self.other = other


class NetworkFileError(LsnError):
    """网络文件解析失败，带行号和列号。"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f"（第 {line} 行，第 {column} 列）" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class BufferFault(RuntimeError):
    """仿真过程中弹性缓冲区越界。"""

    kind = "fault"

    def __init__(self, message: str, t: float, edge: int, occupancy: int):
        super().__init__(message)
        self.t = t
        self.edge = edge
        self.occupancy = occupancy


class BufferUnderflow(BufferFault):
    kind = "underflow"


class BufferOverflow(BufferFault):
    kind = "overflow"
