"""
多时钟网络模型
==============
时钟相位 θ(t) 取连续、严格递增的分段线性函数：断点 (t_k, ω_k) 之间频率恒定，
第一个断点之前和最后一个断点之后按相邻段线性延拓。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from lsnkit.errors import InvalidGraph
from lsnkit.models.graph import Digraph
from lsnkit.models.network import Lsn, _as_int_tuple

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class ClockModel:
    """分段线性相位：segments 为 (t_k, ω_k)，phase_ref 为 θ(t_0)。"""

    segments: Tuple[Tuple[float, float], ...]
    phase_ref: float = 0.0

    def __post_init__(self):
        segments = tuple((float(t), float(omega)) for t, omega in self.segments)
        if not segments:
            raise InvalidGraph("时钟至少需要一个分段")
        for t_prev, t_next in zip(segments, segments[1:]):
            if not t_next[0] > t_prev[0]:
                raise InvalidGraph("时钟断点必须严格递增")
        if any(not omega > 0 for _, omega in segments):
            raise InvalidGraph("时钟频率必须为正")
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "phase_ref", float(self.phase_ref))

    @classmethod
    def identity(cls) -> "ClockModel":
        """θ(t) = t。"""
        return cls(((0.0, 1.0),), 0.0)

    @classmethod
    def constant(cls, omega: float, phase0: float = 0.0, t0: float = 0.0) -> "ClockModel":
        return cls(((t0, omega),), phase0)

    @cached_property
    def _times(self) -> np.ndarray:
        return np.array([t for t, _ in self.segments])

    @cached_property
    def _rates(self) -> np.ndarray:
        return np.array([omega for _, omega in self.segments])

    @cached_property
    def _phases(self) -> np.ndarray:
        """每个断点处的相位。"""
        phases = [self.phase_ref]
        for (t0, omega), (t1, _) in zip(self.segments, self.segments[1:]):
            phases.append(phases[-1] + omega * (t1 - t0))
        return np.array(phases)

    def phase_at(self, t: ArrayLike):
        """θ(t)，支持标量和数组。"""
        ts = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self._times, ts, side="right") - 1, 0, None)
        phase = self._phases[idx] + self._rates[idx] * (ts - self._times[idx])
        return phase.item() if phase.ndim == 0 else phase

    def tick_time(self, k: ArrayLike):
        """θ 的反函数：返回 θ(t) = k 的墙钟时间。"""
        ks = np.asarray(k, dtype=float)
        idx = np.clip(np.searchsorted(self._phases, ks, side="right") - 1, 0, None)
        t = self._times[idx] + (ks - self._phases[idx]) / self._rates[idx]
        return t.item() if t.ndim == 0 else t

    def frequency_at(self, t: float) -> float:
        idx = max(int(np.searchsorted(self._times, t, side="right")) - 1, 0)
        return float(self._rates[idx])

    def floor_phase(self, t: ArrayLike, tolerance: float = 1e-9):
        """
        ⌊θ(t)⌋，与整数相差不超过 tolerance 的相位视为恰在 tick 上。
        floor 右连续，tick 时刻本身计入新的 tick。
        """
        phase = np.asarray(self.phase_at(t), dtype=float)
        nearest = np.rint(phase)
        floors = np.where(np.abs(phase - nearest) <= tolerance * np.maximum(1.0, np.abs(phase)),
                          nearest, np.floor(phase)).astype(np.int64)
        return int(floors) if floors.ndim == 0 else floors

    def ticks_between(self, t0: float, t1: float, tolerance: float = 1e-9) -> np.ndarray:
        """区间 [t0, t1] 内所有整数 tick 的下标。"""
        first = math.ceil(self.phase_at(t0) - tolerance)
        last = self.floor_phase(t1, tolerance)
        return np.arange(first, last + 1, dtype=np.int64)


@dataclass(frozen=True)
class MulticlockNetwork:
    """有向图、每个节点一个时钟、每条边一个整数 λ。"""

    graph: Digraph
    clocks: Tuple[ClockModel, ...]
    latencies: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "clocks", tuple(self.clocks))
        object.__setattr__(self, "latencies", _as_int_tuple(self.latencies, "逻辑时延"))
        if len(self.clocks) != self.graph.n:
            raise InvalidGraph("时钟个数与节点数不一致")
        if len(self.latencies) != self.graph.m:
            raise InvalidGraph("逻辑时延个数与边数不一致")

    @property
    def lsn(self) -> Lsn:
        return Lsn(self.graph, self.latencies)

    def endpoint_clocks(self, edge: int) -> Tuple[ClockModel, ClockModel]:
        src, dst = self.graph.edges[edge]
        index = self.graph.node_index
        return self.clocks[index[src]], self.clocks[index[dst]]


@dataclass(frozen=True)
class FifoSnapshot:
    """某条边 FIFO 在时刻 t 的状态：帧 α..β 在途，ν = β − α + 1。"""

    edge: int
    t: float
    alpha: int
    beta: int
    occupancy: int


@dataclass(frozen=True)
class RealizabilityVerdict:
    """有限时间区间内的可实现性结论（定义要求对所有 t 成立，这里只覆盖区间）。"""

    ok: bool
    horizon: Tuple[float, float]
    nu_max: float
    nu_range: Tuple[int, int] = (0, 0)
    first_violation: Optional[FifoSnapshot] = None
    zero_cycles: Tuple[Tuple, ...] = ()
    samples: int = 0
    bounded_horizon: bool = True
