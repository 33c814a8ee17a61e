"""
数据模型模块
============
统一暴露各层使用的不可变领域类型。
"""

from lsnkit.models.bittide import BittideConfig, ElasticBufferState, SimTrace, SimVerdict, TraceRecord
from lsnkit.models.clock import ClockModel, FifoSnapshot, MulticlockNetwork, RealizabilityVerdict
from lsnkit.models.graph import CycleVector, Digraph, IncidenceMatrix, SpanningTree
from lsnkit.models.network import (
    EquivalenceVerdict,
    ExtendedEvent,
    ExtendedWindow,
    Lsn,
    Relabeling,
)

__all__ = [
    "BittideConfig",
    "ClockModel",
    "CycleVector",
    "Digraph",
    "ElasticBufferState",
    "EquivalenceVerdict",
    "ExtendedEvent",
    "ExtendedWindow",
    "FifoSnapshot",
    "IncidenceMatrix",
    "Lsn",
    "MulticlockNetwork",
    "RealizabilityVerdict",
    "Relabeling",
    "SimTrace",
    "SimVerdict",
    "SpanningTree",
    "TraceRecord",
]
