"""
bittide 仿真模型
================
- BittideConfig：链路墙钟时延、节点标称频率与偏差、缓冲区设定值、控制器参数
- ElasticBufferState：接收端弹性缓冲区
- TraceRecord / SimTrace：按时间排序的事件轨迹与最终结论
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, NamedTuple, Optional, Tuple

from lsnkit import current_config
from lsnkit.errors import BufferFault, InvalidGraph
from lsnkit.models.graph import Digraph, Node

OBSERVE_MODES = ("mean", "instant")
TRACE_MODES = ("full", "control", "none")

SEND = "send"
ARRIVE = "arrive"
POP = "pop"
CONTROL = "control"


def _per_item(value, count: int, what: str) -> tuple:
    if isinstance(value, (int, float)):
        return (value,) * count
    value = tuple(value)
    if len(value) != count:
        raise InvalidGraph(f"{what}需要 {count} 个值，收到 {len(value)} 个")
    return value


@dataclass(frozen=True)
class BittideConfig:
    """一次 bittide 仿真的全部参数；按边/按节点的量与图的顺序对齐。"""

    graph: Digraph
    link_latency: Tuple[float, ...]
    base_freq: Tuple[float, ...]
    freq_offset_ppm: Tuple[float, ...]
    buffer_setpoint: Tuple[int, ...]
    gain: float
    control_period: int
    horizon_ticks: int
    freq_bounds: Tuple[float, float]
    buffer_capacity: Tuple[int, ...] = ()
    observe_mode: str = "mean"
    trace_mode: str = "full"

    def __post_init__(self):
        g = self.graph
        object.__setattr__(self, "link_latency", tuple(float(x) for x in _per_item(self.link_latency, g.m, "链路时延")))
        object.__setattr__(self, "base_freq", tuple(float(x) for x in _per_item(self.base_freq, g.n, "标称频率")))
        object.__setattr__(self, "freq_offset_ppm", tuple(float(x) for x in _per_item(self.freq_offset_ppm, g.n, "频率偏差")))
        object.__setattr__(self, "buffer_setpoint", tuple(int(x) for x in _per_item(self.buffer_setpoint, g.m, "缓冲区设定值")))
        capacity = self.buffer_capacity or tuple(2 * s for s in self.buffer_setpoint)
        object.__setattr__(self, "buffer_capacity", tuple(int(x) for x in _per_item(capacity, g.m, "缓冲区容量")))
        object.__setattr__(self, "freq_bounds", (float(self.freq_bounds[0]), float(self.freq_bounds[1])))

        if any(lat < 0 for lat in self.link_latency):
            raise InvalidGraph("链路时延不能为负")
        if any(not f > 0 for f in self.base_freq):
            raise InvalidGraph("标称频率必须为正")
        low, high = self.freq_bounds
        if not (0 < low <= high):
            raise InvalidGraph("频率上下界必须为正且 ω_min ≤ ω_max")
        if any(s < 1 for s in self.buffer_setpoint):
            raise InvalidGraph("缓冲区设定值至少为 1")
        if any(cap < s for cap, s in zip(self.buffer_capacity, self.buffer_setpoint)):
            raise InvalidGraph("缓冲区容量不能小于设定值")
        if self.control_period < 1 or self.horizon_ticks < 1:
            raise InvalidGraph("控制周期和仿真长度必须为正")
        if self.observe_mode not in OBSERVE_MODES:
            raise InvalidGraph(f"未知的观测模式 {self.observe_mode}")
        if self.trace_mode not in TRACE_MODES:
            raise InvalidGraph(f"未知的轨迹模式 {self.trace_mode}")

    @classmethod
    def with_defaults(cls, graph: Digraph, **overrides) -> "BittideConfig":
        """未给出的参数取自当前配置。"""
        config = current_config()
        nominal = overrides.pop("base_freq", config.NOMINAL_FREQ)
        nominals = (nominal,) if isinstance(nominal, (int, float)) else tuple(nominal)
        bound = config.FREQ_BOUND_PPM * 1e-6
        params = dict(
            link_latency=0.0,
            base_freq=nominal,
            freq_offset_ppm=0.0,
            buffer_setpoint=config.SETPOINT,
            gain=config.GAIN,
            control_period=config.CONTROL_PERIOD,
            horizon_ticks=config.HORIZON_TICKS,
            freq_bounds=(min(nominals) * (1 - bound), max(nominals) * (1 + bound)),
            observe_mode=config.OBSERVE_MODE,
            trace_mode=config.TRACE_MODE,
        )
        params.update(overrides)
        return cls(graph=graph, **params)

    def free_frequency(self, node_index: int) -> float:
        """不加控制时节点的自由运行频率 ω⁰·(1 + offset)。"""
        return self.base_freq[node_index] * (1.0 + self.freq_offset_ppm[node_index] * 1e-6)


@dataclass
class ElasticBufferState:
    """接收端弹性缓冲区，队列中按到达顺序存放帧号。"""

    edge: int
    queue: Deque[int] = field(default_factory=deque)

    @property
    def occupancy(self) -> int:
        return len(self.queue)


class TraceRecord(NamedTuple):
    """一条轨迹记录；tick 为执行该事件的节点的本地 tick 下标（不写入 CSV）。"""

    t: float
    node: Node
    kind: str
    edge: Optional[int]
    frame: Optional[int]
    occupancy: int
    omega: float
    tick: Optional[int] = None


@dataclass(frozen=True)
class SimVerdict:
    ok: bool
    fault_kind: Optional[str] = None
    fault_time: Optional[float] = None
    fault_edge: Optional[int] = None
    message: str = ""


@dataclass
class SimTrace:
    """仿真轨迹（只追加）与统计量。"""

    config: BittideConfig
    records: List[TraceRecord] = field(default_factory=list)
    verdict: SimVerdict = SimVerdict(ok=True)
    fault: Optional[BufferFault] = None
    implied_latencies: Tuple[int, ...] = ()
    observed_latencies: Dict[int, int] = field(default_factory=dict)
    latency_drift: Optional[Tuple[int, int, int]] = None
    cycle_census: Dict[Tuple[Node, ...], int] = field(default_factory=dict)
    census_ok: bool = True
    min_occupancy: List[int] = field(default_factory=list)
    max_occupancy: List[int] = field(default_factory=list)
    breakpoints: List[List[Tuple[float, int, float]]] = field(default_factory=list)
    ticks: List[int] = field(default_factory=list)
    end_time: float = 0.0

    def raise_for_verdict(self) -> None:
        if self.fault is not None:
            raise self.fault

    def records_for(self, edge: int, kind: Optional[str] = None) -> List[TraceRecord]:
        return [r for r in self.records if r.edge == edge and (kind is None or r.kind == kind)]
