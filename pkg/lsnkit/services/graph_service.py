"""
图代数服务层
============
关联矩阵、确定性生成树、基本环和沿树传播的整数求解。所有运算都是纯函数，
整数运算使用 Python 的任意精度整数。
"""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from lsnkit.errors import Disconnected, InvalidGraph, NotACycle
from lsnkit.models.graph import CycleVector, Digraph, IncidenceMatrix, Node, SpanningTree

logger = logging.getLogger(__name__)


class GraphService:
    """图代数服务类"""

    @staticmethod
    def incidence_matrix(g: Digraph) -> IncidenceMatrix:
        """
        构造关联矩阵 B

        B[i][j] = +1 表示边 j 从节点 i 出发，−1 表示到达节点 i。
        """
        entries = np.zeros((g.n, g.m), dtype=np.int64)
        index = g.node_index
        for j, (src, dst) in enumerate(g.edges):
            entries[index[src], j] = 1
            entries[index[dst], j] = -1
        return IncidenceMatrix(entries)

    @staticmethod
    def is_connected(g: Digraph) -> bool:
        """忽略方向后是否连通"""
        return nx.is_connected(g.to_undirected())

    @staticmethod
    def is_strongly_connected(g: Digraph) -> bool:
        """任意两个节点之间都有有向路径"""
        return nx.is_strongly_connected(g.to_networkx())

    @staticmethod
    def spanning_tree(g: Digraph, root: Optional[Node] = None) -> SpanningTree:
        """
        确定性生成树

        按边下标从小到大贪心选边（等价于以下标为权的最小生成树），双向边中
        先列出的方向为主方向；随后从根（默认第一个节点）广度优先确定父指针。

        Raises:
            Disconnected: 对应的无向图不连通
        """
        undirected = nx.Graph()
        undirected.add_nodes_from(g.nodes)
        for idx, (src, dst) in enumerate(g.edges):
            if not undirected.has_edge(src, dst):
                undirected.add_edge(src, dst, index=idx)

        if not nx.is_connected(undirected):
            components = nx.number_connected_components(undirected)
            raise Disconnected(f"图不连通：共有 {components} 个连通分量")

        mst = nx.minimum_spanning_tree(undirected, weight="index", algorithm="kruskal")
        tree_edges = frozenset(data["index"] for _, _, data in mst.edges(data=True))

        root = g.nodes[0] if root is None else root
        if root not in g.node_index:
            raise InvalidGraph(f"根节点 {root} 不在图中")

        tree = GraphService._tree_graph(g, tree_edges)
        parent: Dict[Node, Tuple[Node, int]] = {}
        order = [root]
        for node, child in nx.bfs_edges(tree, root):
            parent[child] = (node, tree.edges[node, child]["index"])
            order.append(child)

        logger.debug("生成树：根 %s，树边 %s", root, sorted(tree_edges))
        return SpanningTree(tree_edges=tree_edges, root=root, parent=parent, order=tuple(order))

    @staticmethod
    def _depths(t: SpanningTree) -> Dict[Node, int]:
        depth = {t.root: 0}
        for node in t.order[1:]:
            depth[node] = depth[t.parent[node][0]] + 1
        return depth

    @staticmethod
    def _step_sign(g: Digraph, edge: int, frm: Node, to: Node) -> int:
        return 1 if g.edges[edge] == (frm, to) else -1

    @staticmethod
    def tree_path(g: Digraph, t: SpanningTree, start: Node, end: Node) -> List[Tuple[int, int]]:
        """树中从 start 到 end 的唯一路径，返回 (边下标, 方向) 序列。"""
        depth = GraphService._depths(t)
        up: List[Tuple[int, int]] = []
        down: List[Tuple[int, int]] = []
        x, y = start, end
        while x != y:
            if depth[x] >= depth[y]:
                p, edge = t.parent[x]
                up.append((edge, GraphService._step_sign(g, edge, x, p)))
                x = p
            else:
                p, edge = t.parent[y]
                down.append((edge, GraphService._step_sign(g, edge, p, y)))
                y = p
        return up + down[::-1]

    @staticmethod
    def fundamental_cycles(g: Digraph, t: SpanningTree) -> List[CycleVector]:
        """
        基本环

        每条非树边对应一个环向量：非树边分量为 +1，再沿树从其终点回到起点。
        返回的 m − n + 1 个向量张成 B 的零空间。
        """
        if len(t.tree_edges) != g.n - 1:
            raise Disconnected("生成树边数必须为 n − 1")
        cycles = []
        for idx, (src, dst) in enumerate(g.edges):
            if idx in t.tree_edges:
                continue
            coeffs = [0] * g.m
            coeffs[idx] = 1
            for edge, sign in GraphService.tree_path(g, t, dst, src):
                coeffs[edge] += sign
            cycles.append(CycleVector(tuple(coeffs), chord=idx))
        return cycles

    @staticmethod
    def _tree_graph(g: Digraph, tree_edges: Iterable[int]) -> nx.Graph:
        # 按边下标加边，邻居顺序因此固定
        tree = nx.Graph()
        tree.add_nodes_from(g.nodes)
        for idx in sorted(tree_edges):
            src, dst = g.edges[idx]
            tree.add_edge(src, dst, index=idx)
        return tree

    @staticmethod
    def tree_solve(g: Digraph, t: SpanningTree, y: Sequence[int], root: Optional[Node] = None) -> Tuple[int, ...]:
        """
        沿生成树求整数解 c

        c[root] = 0，且每条树边满足 c_src − c_dst = y[e]；非树边上的 y 被忽略。
        与 B₁₁ 的幺模逆给出的解一致，因此必然是整数。
        """
        if len(y) != g.m:
            raise InvalidGraph(f"y 的长度 {len(y)} 与边数 {g.m} 不一致")
        root = t.root if root is None else root
        if root not in g.node_index:
            raise InvalidGraph(f"根节点 {root} 不在图中")
        tree = GraphService._tree_graph(g, t.tree_edges)
        values: Dict[Node, int] = {root: 0}
        for node, other in nx.bfs_edges(tree, root):
            idx = tree.edges[node, other]["index"]
            if g.edges[idx][0] == node:
                values[other] = values[node] - int(y[idx])
            else:
                values[other] = values[node] + int(y[idx])

        if len(values) != g.n:
            raise Disconnected("生成树没有覆盖所有节点")
        return tuple(values[node] for node in g.nodes)

    @staticmethod
    def cycle_dot(z: CycleVector, w: Sequence[int]) -> int:
        """带符号的环和 Σ z[e]·w[e]。"""
        if len(z) != len(w):
            raise InvalidGraph(f"环向量长度 {len(z)} 与权重长度 {len(w)} 不一致")
        return sum(sign * int(weight) for sign, weight in zip(z.coeffs, w))

    @staticmethod
    def cycle_vector_from_walk(g: Digraph, walk: Sequence[Node]) -> CycleVector:
        """
        将闭合节点序列转换为环向量

        相邻节点间若有正向边则取正向（+1），否则取反向边（−1）；
        中间节点互不相同，且同一条边不能用两次。
        """
        walk = list(walk)
        if len(walk) < 3 or walk[0] != walk[-1]:
            raise NotACycle("环必须至少包含两条边并回到起点")
        inner = walk[:-1]
        if len(set(inner)) != len(inner):
            raise NotACycle("环的中间节点必须互不相同")

        coeffs = [0] * g.m
        for u, w in zip(walk, walk[1:]):
            if g.has_edge(u, w):
                edge, sign = g.edge_index[(u, w)], 1
            elif g.has_edge(w, u):
                edge, sign = g.edge_index[(w, u)], -1
            else:
                raise NotACycle(f"{u} 与 {w} 之间没有边")
            if coeffs[edge]:
                raise NotACycle(f"边 {g.edge_label(edge)} 被重复使用")
            coeffs[edge] = sign
        return CycleVector(tuple(coeffs))

    @staticmethod
    def directed_cycle_edges(g: Digraph, cycle: Sequence[Node]) -> List[int]:
        """有向环（首尾相同的节点序列）上的边下标；中间节点必须互不相同。"""
        cycle = list(cycle)
        if len(cycle) < 3 or cycle[0] != cycle[-1]:
            raise NotACycle("有向环必须至少包含两条边并回到起点")
        if len(set(cycle[:-1])) != len(cycle) - 1:
            raise NotACycle("有向环的中间节点必须互不相同")
        edges = []
        for u, w in zip(cycle, cycle[1:]):
            if not g.has_edge(u, w):
                raise NotACycle(f"不存在边 {u}->{w}")
            edges.append(g.edge_index[(u, w)])
        return edges

    @staticmethod
    def directed_cycles(g: Digraph) -> List[List[Node]]:
        """
        枚举所有简单有向环（桌面规模），每个环从节点序最小的节点开始并闭合。
        """
        index = g.node_index
        cycles = []
        for cycle in nx.simple_cycles(g.to_networkx()):
            start = min(range(len(cycle)), key=lambda i: index[cycle[i]])
            rotated = cycle[start:] + cycle[:start]
            cycles.append(rotated + [rotated[0]])
        cycles.sort(key=lambda c: (len(c), [index[v] for v in c]))
        return cycles

    @staticmethod
    def integer_rank(vectors: Sequence[CycleVector]) -> int:
        """环向量组的秩；单位模的关联矩阵下与有理数域上的秩相同。"""
        if not vectors:
            return 0
        return int(np.linalg.matrix_rank(np.array([v.coeffs for v in vectors], dtype=np.int64)))
