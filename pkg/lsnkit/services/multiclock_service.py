"""
多时钟网络服务层
================
- 时钟相位与 tick 时刻
- FIFO 边界 α、β 与占用量 ν = ⌊θ_i(t)⌋ − ⌊θ_j(t)⌋ + λ
- 测得的逻辑时延、有限区间可实现性、环上帧数守恒
- 同步实现：所有时钟取恒等相位，缓冲区占用恒等于 λ

ν 只在端点时钟的 tick 时刻变化，因此只需在这些时刻（加上区间端点）求值。
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from lsnkit import current_config
from lsnkit.errors import BadHorizon, NegativeLatency, PreconditionViolated
from lsnkit.models.bittide import ARRIVE, POP, SEND, TraceRecord
from lsnkit.models.clock import ClockModel, FifoSnapshot, MulticlockNetwork, RealizabilityVerdict
from lsnkit.models.graph import Edge, Node
from lsnkit.models.network import Lsn
from lsnkit.services.graph_service import GraphService
from lsnkit.services.lsn_service import LsnService

logger = logging.getLogger(__name__)

EdgeRef = Union[int, Edge]

_KIND_ORDER = {SEND: 0, ARRIVE: 1, POP: 2}


def _tolerance(tolerance: Optional[float]) -> float:
    return current_config().PHASE_TOLERANCE if tolerance is None else tolerance


class MulticlockService:
    """多时钟网络服务类"""

    @staticmethod
    def phase_at(clock: ClockModel, t: float) -> float:
        """时钟在实际时刻 t 的相位 θ(t)。"""
        return clock.phase_at(t)

    @staticmethod
    def tick_time(clock: ClockModel, k: int) -> float:
        """第 k 个 tick 的实际时刻，即 θ(t) = k 的解。"""
        return clock.tick_time(k)

    @staticmethod
    def fifo_bounds(net: MulticlockNetwork, edge: EdgeRef, t: float, tolerance: Optional[float] = None) -> Tuple[int, int]:
        """
        FIFO 中的帧号范围（按发送端时钟编号）

        Returns:
            (α, β)，β = ⌊θ_i(t)⌋，α = ⌊θ_j(t)⌋ − λ + 1
        """
        idx = net.graph.resolve_edge(edge)
        sender, receiver = net.endpoint_clocks(idx)
        tol = _tolerance(tolerance)
        beta = sender.floor_phase(t, tol)
        alpha = receiver.floor_phase(t, tol) - net.latencies[idx] + 1
        return alpha, beta

    @staticmethod
    def occupancy(net: MulticlockNetwork, edge: EdgeRef, t: float, tolerance: Optional[float] = None) -> int:
        """缓冲区占用量 ν = β − α + 1，在两端 tick 之间保持不变。"""
        alpha, beta = MulticlockService.fifo_bounds(net, edge, t, tolerance)
        return beta - alpha + 1

    @staticmethod
    def snapshot(net: MulticlockNetwork, edge: EdgeRef, t: float, tolerance: Optional[float] = None) -> FifoSnapshot:
        """边在时刻 t 的 FIFO 状态（α、β 和占用量）"""
        idx = net.graph.resolve_edge(edge)
        alpha, beta = MulticlockService.fifo_bounds(net, idx, t, tolerance)
        return FifoSnapshot(edge=idx, t=float(t), alpha=alpha, beta=beta, occupancy=beta - alpha + 1)

    @staticmethod
    def measure_logical_latency(net: MulticlockNetwork, edge: EdgeRef, k: int, tolerance: Optional[float] = None) -> int:
        """
        测量第 k 帧的逻辑时延 θ_j(t_rec) − θ_i(t_send)

        t_send 满足 θ_i(t_send) = k，t_rec 满足 θ_j(t_rec) = k + λ；两个相位在
        容差内取整后相减。
        """
        idx = net.graph.resolve_edge(edge)
        sender, receiver = net.endpoint_clocks(idx)
        tol = _tolerance(tolerance)
        t_send = sender.tick_time(k)
        t_rec = receiver.tick_time(k + net.latencies[idx])
        return receiver.floor_phase(t_rec, tol) - sender.floor_phase(t_send, tol)

    @staticmethod
    def _edge_instants(net: MulticlockNetwork, idx: int, t0: float, t1: float, tol: float) -> np.ndarray:
        sender, receiver = net.endpoint_clocks(idx)
        times = [np.array([t0, t1])]
        for clock in (sender, receiver):
            ticks = clock.ticks_between(t0, t1, tol)
            if ticks.size:
                times.append(np.atleast_1d(clock.tick_time(ticks)))
        instants = np.unique(np.concatenate(times))
        return instants[(instants >= t0) & (instants <= t1)]

    @staticmethod
    def check_realizability(
        net: MulticlockNetwork,
        horizon: Tuple[float, float],
        nu_max: int,
        tolerance: Optional[float] = None,
    ) -> RealizabilityVerdict:
        """
        在有限区间 [t0, t1] 内检查 0 ≤ ν ≤ ν_max

        定义要求对所有 t 成立，有限区间只能给出区间内的结论。往返时间为 0 的
        有向环只作为警告报告。

        Raises:
            BadHorizon: t0 ≥ t1
            PreconditionViolated: ν_max ≤ 0
        """
        t0, t1 = float(horizon[0]), float(horizon[1])
        if not t0 < t1:
            raise BadHorizon(f"检查区间无效：[{t0}, {t1}]")
        if nu_max <= 0:
            raise PreconditionViolated("ν_max 必须为正")
        tol = _tolerance(tolerance)

        first: Optional[FifoSnapshot] = None
        lowest, highest = None, None
        samples = 0
        for idx in range(net.graph.m):
            instants = MulticlockService._edge_instants(net, idx, t0, t1, tol)
            sender, receiver = net.endpoint_clocks(idx)
            nu = sender.floor_phase(instants, tol) - receiver.floor_phase(instants, tol) + net.latencies[idx]
            nu = np.atleast_1d(nu)
            samples += int(nu.size)
            lowest = int(nu.min()) if lowest is None else min(lowest, int(nu.min()))
            highest = int(nu.max()) if highest is None else max(highest, int(nu.max()))

            bad = np.flatnonzero((nu < 0) | (nu > nu_max))
            if bad.size:
                t_bad = float(instants[bad[0]])
                if first is None or t_bad < first.t:
                    first = MulticlockService.snapshot(net, idx, t_bad, tol)

        zero_cycles = tuple(
            tuple(cycle)
            for cycle in GraphService.directed_cycles(net.graph)
            if LsnService.directed_cycle_rtt(net.lsn, cycle) == 0
        )
        for cycle in zero_cycles:
            logger.warning("有向环 %s 的往返时间为 0", "->".join(str(v) for v in cycle))

        verdict = RealizabilityVerdict(
            ok=first is None,
            horizon=(t0, t1),
            nu_max=nu_max,
            nu_range=(lowest if lowest is not None else 0, highest if highest is not None else 0),
            first_violation=first,
            zero_cycles=zero_cycles,
            samples=samples,
        )
        if first is not None:
            logger.info(
                "不可实现：边 %s 在 t=%.9g 时 ν=%d",
                net.graph.edge_label(first.edge), first.t, first.occupancy,
            )
        else:
            logger.info("区间 [%g, %g] 内可实现（仅限该区间）", t0, t1)
        return verdict

    @staticmethod
    def cycle_frame_count(net: MulticlockNetwork, cycle: Sequence[Node], t: float, tolerance: Optional[float] = None) -> int:
        """有向环上在途帧数之和，恒等于该环的往返时间。"""
        edges = GraphService.directed_cycle_edges(net.graph, cycle)
        return sum(MulticlockService.occupancy(net, idx, t, tolerance) for idx in edges)

    @staticmethod
    def multiclock_from_lsn(lsn: Lsn, clocks: Sequence[ClockModel]) -> MulticlockNetwork:
        """给逻辑同步网络配上时钟，时钟按节点顺序给出。"""
        return MulticlockNetwork(lsn.graph, tuple(clocks), lsn.latencies)

    @staticmethod
    def synchronous_realization(lsn: Lsn) -> MulticlockNetwork:
        """
        同步实现：所有节点使用恒等时钟 θ(t) = t，缓冲区占用恒等于 λ

        Raises:
            NegativeLatency: 存在负的逻辑时延，需要先做非负重标号
        """
        negative = [lsn.graph.edge_label(idx) for idx, lam in enumerate(lsn.latencies) if lam < 0]
        if negative:
            raise NegativeLatency(f"边 {', '.join(negative)} 的逻辑时延为负，请先做非负重标号")
        clocks = tuple(ClockModel.identity() for _ in lsn.graph.nodes)
        return MulticlockNetwork(lsn.graph, clocks, lsn.latencies)

    @staticmethod
    def sample_trace(net: MulticlockNetwork, t0: float, t1: float, tolerance: Optional[float] = None) -> List[TraceRecord]:
        """
        生成 [t0, t1] 内的事件轨迹

        发送端每个 tick 记一条 send 和一条 arrive（整个 FIFO 视为缓冲区），
        接收端每个 tick 记一条 pop，帧号为 k − λ。同一时刻按边下标、再按
        send/arrive/pop 的顺序排列，占用量按该顺序逐条累计。
        """
        if not t0 < t1:
            raise BadHorizon(f"采样区间无效：[{t0}, {t1}]")
        tol = _tolerance(tolerance)
        g = net.graph
        index = g.node_index

        events = []
        occupancy = {}
        for idx, (src, dst) in enumerate(g.edges):
            sender, receiver = net.endpoint_clocks(idx)
            lam = net.latencies[idx]
            sent = sender.ticks_between(t0, t1, tol)
            popped = receiver.ticks_between(t0, t1, tol)
            # 区间起点之前一刻的占用量
            first_sent = int(np.ceil(sender.phase_at(t0) - tol))
            first_popped = int(np.ceil(receiver.phase_at(t0) - tol))
            occupancy[idx] = (first_sent - 1) - (first_popped - 1) + lam

            for k, t in zip(sent.tolist(), np.atleast_1d(sender.tick_time(sent)).tolist() if sent.size else []):
                omega_src = sender.frequency_at(t)
                events.append((t, idx, SEND, src, k, omega_src, k))
                events.append((t, idx, ARRIVE, dst, k, receiver.frequency_at(t), None))
            for k, t in zip(popped.tolist(), np.atleast_1d(receiver.tick_time(popped)).tolist() if popped.size else []):
                events.append((t, idx, POP, dst, k - lam, receiver.frequency_at(t), k))

        events.sort(key=lambda ev: (ev[0], ev[1], _KIND_ORDER[ev[2]], index[ev[3]]))
        records = []
        for t, idx, kind, node, frame, omega, tick in events:
            if kind == ARRIVE:
                occupancy[idx] += 1
            elif kind == POP:
                occupancy[idx] -= 1
            records.append(TraceRecord(t, node, kind, idx, frame, occupancy[idx], omega, tick))
        logger.debug("采样轨迹：%d 条记录", len(records))
        return records
