"""
等价判定服务层
==============
- 重标号 λ̂ = λ + c_j − c_i
- 等价判定：沿生成树求 c，非树边上不一致即给出违反的基本环
- 在生成树上任意指定时延、非负重标号（最短路径树）
- 可测量的不变量（三角形、菱形）
"""

from __future__ import annotations

import logging
from typing import Dict, Optional, Sequence, Tuple

from lsnkit.errors import GraphMismatch, InvalidGraph, NotStronglyConnected
from lsnkit.models.graph import Node, SpanningTree
from lsnkit.models.network import EquivalenceVerdict, Lsn, Relabeling
from lsnkit.services.graph_service import GraphService
from lsnkit.services.lsn_service import LsnService, Walk

logger = logging.getLogger(__name__)


class EquivalenceService:
    """等价判定服务类"""

    @staticmethod
    def relabel(lsn: Lsn, c: Relabeling) -> Lsn:
        """按 λ̂_{i→j} = λ_{i→j} + c_j − c_i 重标号，图不变。"""
        g = lsn.graph
        if len(c) != g.n:
            raise InvalidGraph(f"重标号需要 {g.n} 个分量，收到 {len(c)} 个")
        index = g.node_index
        latencies = tuple(
            lam + c[index[dst]] - c[index[src]] for lam, (src, dst) in zip(lsn.latencies, g.edges)
        )
        return Lsn(g, latencies)

    @staticmethod
    def check_equivalence(a: Lsn, b: Lsn) -> EquivalenceVerdict:
        """
        判定两个网络是否等价

        取 y = λ − λ̂，沿确定性生成树求出 c（c_root = 0），再在所有边上验证
        c_src − c_dst = y。第一条不满足的非树边所对应的基本环即为反例，
        两个网络在其上的带符号时延和不同。

        Raises:
            GraphMismatch: 底层有向图不同
            Disconnected: 图不连通
        """
        if a.graph != b.graph:
            raise GraphMismatch("两个网络的节点或边不一致")
        g = a.graph
        y = tuple(la - lb for la, lb in zip(a.latencies, b.latencies))
        tree = GraphService.spanning_tree(g)
        c = GraphService.tree_solve(g, tree, y)
        index = g.node_index

        for idx, (src, dst) in enumerate(g.edges):
            if c[index[src]] - c[index[dst]] == y[idx]:
                continue
            cycle = next(z for z in GraphService.fundamental_cycles(g, tree) if z.chord == idx)
            sums = (GraphService.cycle_dot(cycle, a.latencies), GraphService.cycle_dot(cycle, b.latencies))
            logger.debug("不等价：非树边 %s 上的带符号环和 %s", g.edge_label(idx), sums)
            return EquivalenceVerdict(
                equivalent=False, difference=y, violating_cycle=cycle, signed_sums=sums
            )

        certificate = Relabeling(c).normalized(index[tree.root])
        logger.debug("等价，证书 c = %s", certificate.offsets)
        return EquivalenceVerdict(equivalent=True, difference=y, certificate=certificate)

    @staticmethod
    def relabel_tree_to(lsn: Lsn, tree: SpanningTree, gamma: Dict[int, int]) -> Relabeling:
        """
        在生成树上指定任意整数时延

        返回 c，使 relabel(lsn, c) 在每条树边 e 上的时延恰为 gamma[e]。
        gamma 以边下标为键，必须覆盖所有树边。
        """
        g = lsn.graph
        missing = set(tree.tree_edges) - set(gamma)
        if missing:
            raise InvalidGraph(f"缺少树边 {sorted(missing)} 的目标时延")
        y = [0] * g.m
        for idx in tree.tree_edges:
            y[idx] = lsn.latencies[idx] - int(gamma[idx])
        return Relabeling(GraphService.tree_solve(g, tree, y))

    @staticmethod
    def nonnegative_relabel(lsn: Lsn, root: Optional[Node] = None) -> Tuple[Relabeling, Lsn, Tuple[int, ...]]:
        """
        非负重标号

        从根（默认第一个节点）出发求最短路径树，取 c_i = −d(root, i)，
        使树边时延为 0、所有边时延非负。

        Returns:
            (c, 重标号后的网络, 最短路径树的边下标)

        Raises:
            NotStronglyConnected: 图不是强连通的
            NegativeCycle: 存在负的有向环
        """
        g = lsn.graph
        if not GraphService.is_strongly_connected(g):
            raise NotStronglyConnected("非负重标号要求图是强连通的")
        root = g.nodes[0] if root is None else root
        dist, pred = LsnService.shortest_latencies(lsn, root)
        c = Relabeling(tuple(-dist[node] for node in g.nodes))
        relabeled = EquivalenceService.relabel(lsn, c)
        tree_edges = tuple(sorted(pred[node] for node in g.nodes if node != root))
        logger.debug("最短路径树 %s，c = %s", tree_edges, c.offsets)
        return c, relabeled, tree_edges

    @staticmethod
    def cycle_invariant(lsn: Lsn, cycle: Walk) -> int:
        """
        重标号不变量：环上的带符号时延和

        三角形（1→2→3 与 1→3）：receive(B) − receive(A) = λ₁₂ + λ₂₃ − λ₁₃；
        菱形（1→2、3→2、1→4、3→4）：(λ₁₂ − λ₃₂) − (λ₁₄ − λ₃₄)。
        """
        return LsnService.signed_cycle_rtt(lsn, cycle)

    @staticmethod
    def triangle_invariant(lsn: Lsn, source: Node, relay: Node, sink: Node) -> int:
        """源节点同时发出 A（直达）和 B（经中继）时 receive(B) − receive(A)。"""
        return lsn.latency(source, relay) + lsn.latency(relay, sink) - lsn.latency(source, sink)

    @staticmethod
    def diamond_invariant(lsn: Lsn, left: Node, top: Node, right: Node, bottom: Node) -> int:
        """
        left 向 top、bottom 发 A、B，right 向 top、bottom 发 C、D 时
        (receive(A) − receive(C)) − (receive(B) − receive(D))。
        """
        return (lsn.latency(left, top) - lsn.latency(right, top)) - (
            lsn.latency(left, bottom) - lsn.latency(right, bottom)
        )

    @staticmethod
    def pairwise_round_trips(lsn: Lsn) -> Dict[Tuple[Node, Node], int]:
        """所有长度为 2 的往返时间（它们不足以判定等价）。"""
        g = lsn.graph
        trips = {}
        for src, dst in g.edges:
            if g.has_edge(dst, src) and g.node_index[src] < g.node_index[dst]:
                trips[(src, dst)] = lsn.latency(src, dst) + lsn.latency(dst, src)
        return trips

    @staticmethod
    def verify_certificate(a: Lsn, b: Lsn, c: Relabeling) -> bool:
        """c 作用在 a 上后的时延是否逐边等于 b 的时延"""
        return EquivalenceService.relabel(a, c).latencies == b.latencies

    @staticmethod
    def parse_gamma(tree: SpanningTree, values: Sequence[int]) -> Dict[int, int]:
        """按树边下标升序把一串整数对应到树边上。"""
        edges = sorted(tree.tree_edges)
        if len(values) != len(edges):
            raise InvalidGraph(f"需要 {len(edges)} 个树边时延，收到 {len(values)} 个")
        return dict(zip(edges, (int(v) for v in values)))
