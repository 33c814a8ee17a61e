"""
bittide 仿真服务层
==================
离散事件仿真：每个节点在本地 tick 上从每个弹性缓冲区取出一帧、向每条出边
发送一帧；链路按墙钟时延 l 送达，接收端把帧放入弹性缓冲区。每隔
control_period 个 tick，节点根据缓冲区占用量调整自己的频率。

事件堆中只保存每个节点的下一个 tick 和每条链路队首帧的到达，同一时刻先处理
到达、再处理 tick，并按节点下标、边下标排序，保证结果完全确定。
"""

from __future__ import annotations

import heapq
import logging
import math
from collections import deque
from typing import Deque, Dict, List, Optional, Sequence, Tuple

from lsnkit.errors import BufferOverflow, BufferUnderflow, InsufficientData, InvalidGraph, LatencyNotConstant
from lsnkit.models.bittide import (
    ARRIVE,
    CONTROL,
    POP,
    SEND,
    BittideConfig,
    ElasticBufferState,
    SimTrace,
    SimVerdict,
    TraceRecord,
)
from lsnkit.models.clock import ClockModel, MulticlockNetwork
from lsnkit.models.graph import Node
from lsnkit.services.graph_service import GraphService

logger = logging.getLogger(__name__)

_ARRIVAL = 0
_TICK = 1


class BittideService:
    """bittide 仿真服务类"""

    @staticmethod
    def controller_step(occupancies: Sequence[float], cfg: BittideConfig, node_index: int = 0) -> float:
        """
        比例控制器

        ω = clamp(ω_free · (1 + k_p · mean((occ − s) / s)), ω_min, ω_max)，
        occupancies 与节点的入边按边下标升序对齐；没有入边时保持自由频率。
        """
        node = cfg.graph.nodes[node_index]
        incoming = cfg.graph.in_edges[node]
        if len(occupancies) != len(incoming):
            raise InvalidGraph(f"节点 {node} 有 {len(incoming)} 条入边，收到 {len(occupancies)} 个占用量")
        free = cfg.free_frequency(node_index)
        if incoming:
            error = sum(
                (occ - cfg.buffer_setpoint[idx]) / cfg.buffer_setpoint[idx]
                for occ, idx in zip(occupancies, incoming)
            ) / len(incoming)
        else:
            error = 0.0
        low, high = cfg.freq_bounds
        return min(max(free * (1.0 + cfg.gain * error), low), high)

    @staticmethod
    def implied_latencies(cfg: BittideConfig) -> Tuple[int, ...]:
        """
        初始化隐含的逻辑时延

        θ(0) = 0，过去按初始频率匀速运行：帧 k ≤ 0 在 k/ω 发出，满足
        k/ω + l > 0 的仍在链路上，即 k ≥ k_min = ⌊−l·ω⌋ + 1；缓冲区预先放入
        k_min − s .. k_min − 1 共 s 帧。接收端第 1 个 tick 取出帧 k_min − s，
        所以 λ = 1 + s − k_min。
        """
        latencies = []
        for idx, (src, _dst) in enumerate(cfg.graph.edges):
            omega = cfg.free_frequency(cfg.graph.node_index[src])
            kmin = math.floor(-cfg.link_latency[idx] * omega) + 1
            latencies.append(1 + cfg.buffer_setpoint[idx] - kmin)
        return tuple(latencies)

    @staticmethod
    def simulate(cfg: BittideConfig) -> SimTrace:
        """
        运行一次仿真，直到某个节点的下一个 tick 超过 horizon_ticks，或出现缓冲区故障

        故障不会抛出，而是记录在 trace.fault / trace.verdict 中，轨迹保留到故障
        发生为止；需要异常时调用 trace.raise_for_verdict()。每个到达和 tick 之后
        都检查有向环上的帧数（链路在途加缓冲区）是否保持初始值，结果记在 trace.census_ok。
        """
        g = cfg.graph
        n, m = g.n, g.m
        index = g.node_index
        full = cfg.trace_mode == "full"
        with_control = cfg.trace_mode in ("full", "control")

        omega = [cfg.free_frequency(i) for i in range(n)]
        tick = [0] * n
        breakpoints: List[List[Tuple[float, int, float]]] = [[(0.0, 0, omega[i])] for i in range(n)]
        incoming = [g.in_edges[node] for node in g.nodes]
        outgoing = [g.out_edges[node] for node in g.nodes]
        touched = [tuple(incoming[i]) + tuple(outgoing[i]) for i in range(n)]

        buffers = [ElasticBufferState(idx) for idx in range(m)]
        links: List[Deque[Tuple[float, int]]] = [deque() for _ in range(m)]
        heap: List[Tuple[float, int, int, int]] = []

        for idx, (src, _dst) in enumerate(g.edges):
            w = omega[index[src]]
            latency = cfg.link_latency[idx]
            kmin = math.floor(-latency * w) + 1
            buffers[idx].queue.extend(range(kmin - cfg.buffer_setpoint[idx], kmin))
            for k in range(kmin, 1):
                links[idx].append((k / w + latency, k))
            if links[idx]:
                heapq.heappush(heap, (links[idx][0][0], index[g.edges[idx][1]], _ARRIVAL, idx))

        implied = BittideService.implied_latencies(cfg)
        trace = SimTrace(config=cfg, implied_latencies=implied, breakpoints=breakpoints)
        trace.min_occupancy = [buf.occupancy for buf in buffers]
        trace.max_occupancy = [buf.occupancy for buf in buffers]

        cycles = [tuple(cycle) for cycle in GraphService.directed_cycles(g)]
        cycle_edges = {cycle: GraphService.directed_cycle_edges(g, cycle) for cycle in cycles}
        edge_cycles = [[cycle for cycle, edges in cycle_edges.items() if idx in edges] for idx in range(m)]
        edge_frames = [len(links[idx]) + buffers[idx].occupancy for idx in range(m)]

        trace.cycle_census = {cycle: sum(edge_frames[idx] for idx in edges) for cycle, edges in cycle_edges.items()}
        expected = {cycle: sum(implied[idx] for idx in edges) for cycle, edges in cycle_edges.items()}
        if trace.cycle_census != expected:
            logger.warning("初始化后的环上帧数与隐含时延不一致：%s", trace.cycle_census)
            trace.census_ok = False
        frames = dict(trace.cycle_census)
        conserved = True

        def recount(edges: Sequence[int], now: float) -> bool:
            """按链路和缓冲区的实际长度更新环上帧数；有环偏离初始值时返回 False。"""
            changed = []
            for idx in edges:
                actual = len(links[idx]) + buffers[idx].occupancy
                delta = actual - edge_frames[idx]
                if delta:
                    edge_frames[idx] = actual
                    for cycle in edge_cycles[idx]:
                        frames[cycle] += delta
                        changed.append(cycle)
            for cycle in changed:
                if frames[cycle] != trace.cycle_census[cycle]:
                    logger.warning(
                        "t=%.9g 时环 %s 上的帧数从 %d 变为 %d",
                        now, "->".join(str(v) for v in cycle), trace.cycle_census[cycle], frames[cycle],
                    )
                    trace.census_ok = False
                    return False
            return True

        sums = [0.0] * m
        samples = [0] * n

        for i in range(n):
            heapq.heappush(heap, (1.0 / omega[i], i, _TICK, -1))

        logger.info("开始 bittide 仿真：%d 个节点，%d 条边，%d 个 tick", n, m, cfg.horizon_ticks)
        records = trace.records
        t = 0.0
        fault = None

        while heap:
            t, i, kind, idx = heapq.heappop(heap)
            node = g.nodes[i]

            if kind == _ARRIVAL:
                _arrival, frame = links[idx].popleft()
                buf = buffers[idx]
                buf.queue.append(frame)
                occ = buf.occupancy
                if occ > trace.max_occupancy[idx]:
                    trace.max_occupancy[idx] = occ
                if full:
                    records.append(TraceRecord(t, node, ARRIVE, idx, frame, occ, omega[i]))
                if occ > cfg.buffer_capacity[idx]:
                    fault = BufferOverflow(
                        f"边 {g.edge_label(idx)} 的弹性缓冲区溢出（t={t:.9g}，占用量 {occ}）", t, idx, occ
                    )
                    break
                if links[idx]:
                    heapq.heappush(heap, (links[idx][0][0], i, _ARRIVAL, idx))
                if conserved:
                    conserved = recount((idx,), t)
                continue

            p = tick[i] + 1
            if p > cfg.horizon_ticks:
                break
            tick[i] = p

            for idx in incoming[i]:
                buf = buffers[idx]
                if not buf.queue:
                    fault = BufferUnderflow(
                        f"边 {g.edge_label(idx)} 的弹性缓冲区下溢（t={t:.9g}，节点 {node} 的第 {p} 个 tick）",
                        t, idx, 0,
                    )
                    break
                frame = buf.queue.popleft()
                occ = buf.occupancy
                if occ < trace.min_occupancy[idx]:
                    trace.min_occupancy[idx] = occ
                sums[idx] += occ

                latency = p - frame
                if latency != implied[idx] and trace.latency_drift is None:
                    trace.latency_drift = (idx, implied[idx], latency)
                    logger.warning("边 %s 的逻辑时延从 %d 变为 %d", g.edge_label(idx), implied[idx], latency)
                trace.observed_latencies.setdefault(idx, latency)
                if full:
                    records.append(TraceRecord(t, node, POP, idx, frame, occ, omega[i], p))
            if fault is not None:
                break
            samples[i] += 1

            for idx in outgoing[i]:
                link = links[idx]
                link.append((t + cfg.link_latency[idx], p))
                if len(link) == 1:
                    heapq.heappush(heap, (link[0][0], index[g.edges[idx][1]], _ARRIVAL, idx))
                if full:
                    records.append(TraceRecord(t, node, SEND, idx, p, buffers[idx].occupancy, omega[i], p))
            if conserved:
                conserved = recount(touched[i], t)

            if p % cfg.control_period == 0:
                if cfg.observe_mode == "mean":
                    observed = [sums[idx] / samples[i] for idx in incoming[i]]
                else:
                    observed = [buffers[idx].occupancy for idx in incoming[i]]
                omega[i] = BittideService.controller_step(observed, cfg, i)
                breakpoints[i].append((t, p, omega[i]))
                for idx in incoming[i]:
                    sums[idx] = 0.0
                samples[i] = 0
                if with_control:
                    total = sum(buffers[idx].occupancy for idx in incoming[i])
                    records.append(TraceRecord(t, node, CONTROL, None, None, total, omega[i], p))

            heapq.heappush(heap, (t + 1.0 / omega[i], i, _TICK, -1))

        trace.ticks = list(tick)
        trace.end_time = t
        if fault is not None:
            trace.fault = fault
            trace.verdict = SimVerdict(
                ok=False, fault_kind=fault.kind, fault_time=fault.t, fault_edge=fault.edge, message=str(fault)
            )
            logger.info("仿真在 t=%.9g 终止：%s", fault.t, fault)
        else:
            trace.verdict = SimVerdict(ok=True, message=f"完成 {cfg.horizon_ticks} 个 tick")
            logger.info("仿真完成：t=%.9g，占用量范围 [%d, %d]", t, min(trace.min_occupancy, default=0),
                        max(trace.max_occupancy, default=0))
        return trace

    @staticmethod
    def trace_logical_latency(trace: SimTrace, edge) -> int:
        """
        从轨迹中测量一条边的逻辑时延：同一帧的接收端 pop tick 减去发送端 send tick

        Raises:
            InsufficientData: 少于两对 send/pop
            LatencyNotConstant: 两帧的逻辑时延不同
        """
        idx = trace.config.graph.resolve_edge(edge)
        sent: Dict[int, TraceRecord] = {}
        popped: Dict[int, TraceRecord] = {}
        for record in trace.records:
            if record.edge != idx or record.tick is None:
                continue
            if record.kind == SEND:
                sent[record.frame] = record
            elif record.kind == POP:
                popped[record.frame] = record

        pairs = [(sent[frame], popped[frame]) for frame in sorted(sent.keys() & popped.keys())]
        if len(pairs) < 2:
            raise InsufficientData(f"边 {trace.config.graph.edge_label(idx)} 上只有 {len(pairs)} 对 send/pop 记录")

        first_send, first_pop = pairs[0]
        value = first_pop.tick - first_send.tick
        for send, pop in pairs[1:]:
            if pop.tick - send.tick != value:
                raise LatencyNotConstant(
                    f"帧 {first_send.frame} 与帧 {send.frame} 的逻辑时延不同",
                    (first_send.frame, value),
                    (send.frame, pop.tick - send.tick),
                )
        return value

    @staticmethod
    def clock_models(trace: SimTrace) -> Tuple[ClockModel, ...]:
        """把每个节点的频率断点导出为分段线性时钟，θ(0) = 0。"""
        clocks = []
        for points in trace.breakpoints:
            segments = []
            for t, _tick, omega in points:
                if segments and t <= segments[-1][0]:
                    segments[-1] = (segments[-1][0], omega)
                else:
                    segments.append((t, omega))
            clocks.append(ClockModel(tuple(segments), phase_ref=0.0))
        return tuple(clocks)

    @staticmethod
    def as_multiclock(trace: SimTrace) -> MulticlockNetwork:
        """仿真时钟加初始化隐含的逻辑时延，用于与多时钟模型交叉验证。"""
        return MulticlockNetwork(trace.config.graph, BittideService.clock_models(trace), trace.implied_latencies)
