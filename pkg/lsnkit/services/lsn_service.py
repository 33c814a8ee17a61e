"""
逻辑同步网络服务层
==================
- 路径与环上的逻辑时延
- 正往返时间判定（networkx 的 Bellman–Ford 负环检测）
- 扩展图的有限窗口与无环性
- happens-before（⊏）偏序：最短时延加计算边的余量
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from lsnkit.errors import BadHorizon, NegativeCycle, NotACycle, NotAPath, PreconditionViolated
from lsnkit.models.graph import CycleVector, Digraph, Node
from lsnkit.models.network import (
    COMMUNICATION,
    COMPUTATIONAL,
    ExtendedEvent,
    ExtendedWindow,
    Lsn,
)
from lsnkit.services.graph_service import GraphService

logger = logging.getLogger(__name__)

Walk = Union[Sequence[Node], CycleVector]


def _has_negative_cycle(g: Digraph, weights: Sequence[int]) -> bool:
    return nx.negative_edge_cycle(g.to_networkx(weights))


def _find_negative_cycle(g: Digraph, weights: Sequence[int]) -> Optional[List[Node]]:
    """
    取出一个权重和为负的有向环

    Returns:
        闭合的节点序列（首尾相同），不存在负环时返回 None
    """
    graph = g.to_networkx(weights)
    if not nx.negative_edge_cycle(graph):
        return None
    for source in g.nodes:
        try:
            return nx.find_negative_cycle(graph, source)
        except nx.NetworkXError:
            continue
    return None


@lru_cache(maxsize=128)
def _latency_closure(lsn: Lsn) -> Dict[Node, Dict[Node, int]]:
    """所有节点对之间的最短路径时延（Floyd–Warshall），不可达的节点对不出现。"""
    closure = nx.floyd_warshall(lsn.graph.to_networkx(lsn.latencies))
    if any(closure[node][node] < 0 for node in lsn.graph.nodes):
        raise NegativeCycle("存在负的有向环")
    return {
        src: {dst: int(value) for dst, value in row.items() if value != math.inf}
        for src, row in closure.items()
    }


class LsnService:
    """逻辑同步网络服务类"""

    @staticmethod
    def directed_path_latency(lsn: Lsn, path: Sequence[Node]) -> int:
        """
        有向路径的逻辑时延 λ_P = Σ λ

        Raises:
            NotAPath: 相邻节点之间没有边，或节点重复
        """
        path = list(path)
        if not path:
            raise NotAPath("路径不能为空")
        if len(set(path)) != len(path):
            raise NotAPath("路径中的节点必须互不相同")
        total = 0
        for u, w in zip(path, path[1:]):
            if not lsn.graph.has_edge(u, w):
                raise NotAPath(f"不存在边 {u}->{w}")
            total += lsn.latency(u, w)
        return total

    @staticmethod
    def directed_cycle_rtt(lsn: Lsn, cycle: Sequence[Node]) -> int:
        """有向环的往返时间（localticks）。"""
        edges = GraphService.directed_cycle_edges(lsn.graph, cycle)
        return sum(lsn.latencies[idx] for idx in edges)

    @staticmethod
    def signed_cycle_rtt(lsn: Lsn, walk: Walk) -> int:
        """
        带符号的环时延 Σ λ_e·o_e

        walk 可以是闭合节点序列，也可以直接给出环向量。
        """
        if isinstance(walk, CycleVector):
            z = walk
            incidence = GraphService.incidence_matrix(lsn.graph)
            if len(z) != lsn.graph.m or incidence.apply(z.coeffs).any() or not any(z.coeffs):
                raise NotACycle("给定的向量不是环的关联向量")
        else:
            z = GraphService.cycle_vector_from_walk(lsn.graph, walk)
        return GraphService.cycle_dot(z, lsn.latencies)

    @staticmethod
    def min_directed_cycle_rtt(lsn: Lsn) -> Optional[int]:
        """
        所有有向环上往返时间的最小值；没有有向环时返回 None。

        没有负环时取 min(λ_{i→j} + d(j, i))，d 为 Floyd–Warshall 闭包；
        存在负环时最短路径无定义，改为枚举简单环。
        """
        g = lsn.graph
        if _has_negative_cycle(g, lsn.latencies):
            return min(LsnService.directed_cycle_rtt(lsn, cycle) for cycle in GraphService.directed_cycles(g))
        closure = _latency_closure(lsn)
        best = None
        for idx, (src, dst) in enumerate(g.edges):
            back = closure[dst].get(src)
            if back is not None and (best is None or lsn.latencies[idx] + back < best):
                best = lsn.latencies[idx] + back
        return best

    @staticmethod
    def has_positive_rtts(lsn: Lsn) -> bool:
        """
        每个有向环的往返时间都为正（没有有向环时自然成立）

        在权重 (n+1)·λ − 1 下做负环检测：长度 k ≤ n 的环满足
        Σλ ≥ 1 ⇔ Σ((n+1)λ − 1) ≥ 0。
        """
        g = lsn.graph
        return not _has_negative_cycle(g, [(g.n + 1) * lam - 1 for lam in lsn.latencies])

    @staticmethod
    def nonpositive_cycle(lsn: Lsn) -> Optional[List[Node]]:
        """返回一个往返时间不为正的有向环（闭合节点序列），不存在时返回 None。"""
        g = lsn.graph
        return _find_negative_cycle(g, [(g.n + 1) * lam - 1 for lam in lsn.latencies])

    @staticmethod
    def shortest_latencies(lsn: Lsn, source: Node) -> Tuple[Dict[Node, int], Dict[Node, int]]:
        """
        从 source 出发的最短路径时延和最短路径树

        Returns:
            (距离, 节点 → 树中指向它的边下标)；不可达的节点不出现

        Raises:
            NegativeCycle: 从 source 可达负环
        """
        g = lsn.graph
        graph = g.to_networkx(lsn.latencies)
        try:
            pred, dist = nx.bellman_ford_predecessor_and_distance(graph, source)
        except nx.NetworkXUnbounded:
            cycle = GraphService.directed_cycle_edges(g, nx.find_negative_cycle(graph, source))
            labels = [g.edge_label(idx) for idx in cycle]
            raise NegativeCycle(f"存在负的有向环：{', '.join(labels)}", cycle) from None
        # 每个列表的第一个前驱来自最后一次严格松弛，这些边构成一棵树
        tree = {node: g.edge_index[(parents[0], node)] for node, parents in pred.items() if parents}
        return dict(dist), tree

    @staticmethod
    def extended_window(lsn: Lsn, lo: int, hi: int) -> ExtendedWindow:
        """
        扩展图在 [lo, hi] 上的切片

        计算边 (i,τ)→(i,τ+1)，通信边 (i,τ)→(j,τ+λ_ij)，两端都在窗口内才保留。
        """
        if lo > hi:
            raise BadHorizon(f"窗口下界 {lo} 大于上界 {hi}")
        g = lsn.graph
        events = tuple(ExtendedEvent(node, tau) for node in g.nodes for tau in range(lo, hi + 1))
        edges = []
        for node in g.nodes:
            for tau in range(lo, hi):
                edges.append((ExtendedEvent(node, tau), ExtendedEvent(node, tau + 1), COMPUTATIONAL))
        for idx, (src, dst) in enumerate(g.edges):
            lam = lsn.latencies[idx]
            for tau in range(max(lo, lo - lam), min(hi, hi - lam) + 1):
                edges.append((ExtendedEvent(src, tau), ExtendedEvent(dst, tau + lam), COMMUNICATION))
        return ExtendedWindow(lo=lo, hi=hi, events=events, edges=tuple(edges))

    @staticmethod
    def is_window_acyclic(w: ExtendedWindow) -> bool:
        """窗口切片是否无环（合法时延下恒成立）"""
        return nx.is_directed_acyclic_graph(w.to_networkx())

    @staticmethod
    def reachable_in_window(w: ExtendedWindow, a: ExtendedEvent, b: ExtendedEvent) -> bool:
        """窗口内是否存在一条长度至少为 1 的 a → b 有向路径（暴力可达性）。"""
        graph = w.to_networkx()
        if a not in graph or b not in graph:
            return False
        return b in nx.descendants(graph, a)

    @staticmethod
    def happens_before(lsn: Lsn, a: ExtendedEvent, b: ExtendedEvent) -> bool:
        """
        a ⊏ b

        同一节点：ρ > τ；不同节点：ρ − τ ≥ d(i, j)，d 为 i 到 j 的最短路径时延，
        多出的部分由计算边补足。不可达时为 False。

        Raises:
            PreconditionViolated: 网络存在非正的有向环，⊏ 没有定义
        """
        if not LsnService.has_positive_rtts(lsn):
            raise PreconditionViolated("网络存在往返时间不为正的有向环，happens-before 无定义")
        if a.node == b.node:
            return b.tick > a.tick
        distance = _latency_closure(lsn)[a.node].get(b.node)
        if distance is None:
            return False
        return b.tick - a.tick >= distance
