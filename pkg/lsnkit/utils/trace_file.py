"""
轨迹文件读写工具
================
CSV 表头固定为 t,node,kind,edge,frame,occupancy,omega，每个事件一行，
edge 列写作 "src->dst"，控制事件的 edge 和 frame 为空。
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import pandas as pd

from lsnkit.errors import InsufficientData, NetworkFileError
from lsnkit.models.bittide import ARRIVE, CONTROL, POP, SEND, TraceRecord
from lsnkit.models.graph import Digraph

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["t", "node", "kind", "edge", "frame", "occupancy", "omega"]

# 每类事件对弹性缓冲区占用量的影响
_DELTA = {SEND: 0, ARRIVE: 1, POP: -1}


def records_to_frame(records: Sequence[TraceRecord], graph: Digraph) -> pd.DataFrame:
    rows = [
        {
            "t": record.t,
            "node": record.node,
            "kind": record.kind,
            "edge": graph.edge_label(record.edge) if record.edge is not None else None,
            "frame": record.frame,
            "occupancy": record.occupancy,
            "omega": record.omega,
        }
        for record in records
    ]
    frame = pd.DataFrame(rows, columns=TRACE_COLUMNS)
    return frame.astype({"frame": "Int64", "occupancy": "int64"})


def write_trace(path: Union[str, Path], records: Sequence[TraceRecord], graph: Digraph) -> int:
    """写出轨迹 CSV，返回写入的行数。"""
    frame = records_to_frame(records, graph)
    frame.to_csv(path, index=False, float_format="%.12g")
    logger.debug("写出轨迹 %s：%d 行", path, len(frame))
    return len(frame)


def read_trace(path: Union[str, Path]) -> pd.DataFrame:
    """
    读取轨迹 CSV

    Raises:
        NetworkFileError: 表头与约定不一致
    """
    frame = pd.read_csv(path, dtype={"node": str, "kind": str, "edge": str})
    if list(frame.columns) != TRACE_COLUMNS:
        raise NetworkFileError(f"轨迹文件表头应为 {','.join(TRACE_COLUMNS)}，实际为 {','.join(frame.columns)}")
    return frame.astype({"frame": "Int64"})


def replay_occupancy(frame: pd.DataFrame) -> List[Tuple[int, int, int]]:
    """
    按 send/arrive/pop 的增量重放每条边的占用量

    Returns:
        不一致之处的列表 (行号, 期望值, 实际值)；为空表示轨迹自洽
    """
    events = frame[frame["kind"].isin(list(_DELTA))]
    if events.empty:
        raise InsufficientData("轨迹中没有 send/arrive/pop 事件")
    mismatches = []
    for _edge, group in events.groupby("edge", sort=False):
        previous = None
        for row, kind, occupancy in zip(group.index, group["kind"], group["occupancy"]):
            if previous is not None:
                expected = previous + _DELTA[kind]
                if int(occupancy) != expected:
                    mismatches.append((int(row), expected, int(occupancy)))
            previous = int(occupancy)
    return mismatches


def is_time_ordered(frame: pd.DataFrame) -> bool:
    return bool(frame["t"].is_monotonic_increasing)


def control_series(frame: pd.DataFrame) -> pd.DataFrame:
    """控制事件：每个节点的频率随时间变化。"""
    return frame[frame["kind"] == CONTROL][["t", "node", "omega", "occupancy"]]
