"""
有向图数据模型
==============
节点和边的顺序是稳定的，决定了关联矩阵的行列下标。所有类型在构造后不可变。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Hashable, List, Union, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from lsnkit.errors import InvalidGraph

Node = Hashable
Edge = Tuple[Node, Node]


@dataclass(frozen=True)
class Digraph:
    """有向图：节点列表和 (src, dst) 边列表，不允许自环和重复边。"""

    nodes: Tuple[Node, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple((src, dst) for src, dst in self.edges))

        if not self.nodes:
            raise InvalidGraph("图中至少需要一个节点")
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidGraph("节点标识重复")
        declared = set(self.nodes)
        seen = set()
        for src, dst in self.edges:
            if src not in declared or dst not in declared:
                raise InvalidGraph(f"边 {src}->{dst} 的端点未声明")
            if src == dst:
                raise InvalidGraph(f"不允许自环 {src}->{dst}")
            if (src, dst) in seen:
                raise InvalidGraph(f"重复的边 {src}->{dst}")
            seen.add((src, dst))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def node_index(self) -> Dict[Node, int]:
        return {node: idx for idx, node in enumerate(self.nodes)}

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {edge: idx for idx, edge in enumerate(self.edges)}

    @cached_property
    def incident_edges(self) -> Dict[Node, Tuple[int, ...]]:
        """每个节点关联的边下标（升序）。"""
        incident: Dict[Node, List[int]] = {node: [] for node in self.nodes}
        for idx, (src, dst) in enumerate(self.edges):
            incident[src].append(idx)
            incident[dst].append(idx)
        return {node: tuple(sorted(idxs)) for node, idxs in incident.items()}

    @cached_property
    def out_edges(self) -> Dict[Node, Tuple[int, ...]]:
        out: Dict[Node, List[int]] = {node: [] for node in self.nodes}
        for idx, (src, _dst) in enumerate(self.edges):
            out[src].append(idx)
        return {node: tuple(idxs) for node, idxs in out.items()}

    @cached_property
    def in_edges(self) -> Dict[Node, Tuple[int, ...]]:
        inc: Dict[Node, List[int]] = {node: [] for node in self.nodes}
        for idx, (_src, dst) in enumerate(self.edges):
            inc[dst].append(idx)
        return {node: tuple(idxs) for node, idxs in inc.items()}

    def has_edge(self, src: Node, dst: Node) -> bool:
        return (src, dst) in self.edge_index

    def edge_label(self, idx: int) -> str:
        src, dst = self.edges[idx]
        return f"{src}->{dst}"

    def resolve_edge(self, edge: Union[int, Edge]) -> int:
        """接受边下标或 (src, dst)，返回边下标。"""
        if isinstance(edge, tuple):
            if edge not in self.edge_index:
                raise InvalidGraph(f"不存在边 {edge[0]}->{edge[1]}")
            return self.edge_index[edge]
        if isinstance(edge, bool) or not 0 <= int(edge) < self.m:
            raise InvalidGraph(f"边下标 {edge} 越界")
        return int(edge)

    def to_networkx(self, weights: Optional[Sequence[int]] = None) -> nx.DiGraph:
        """转换为 networkx 有向图，边属性 index 为边下标，weight 为可选权重。"""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        for idx, (src, dst) in enumerate(self.edges):
            attrs = {"index": idx}
            if weights is not None:
                attrs["weight"] = int(weights[idx])
            graph.add_edge(src, dst, **attrs)
        return graph

    def to_undirected(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    """n×m 整数关联矩阵：边 j 从节点 i 出发为 +1，到达节点 i 为 −1。"""

    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.entries)) if self.entries.size else 0

    def apply(self, z: Sequence[int]) -> np.ndarray:
        """计算 B·z。"""
        return self.entries @ np.asarray(z, dtype=np.int64)

    def transpose_apply(self, c: Sequence[int]) -> np.ndarray:
        """计算 Bᵀ·c，即每条边上的 c_src − c_dst。"""
        return self.entries.T @ np.asarray(c, dtype=np.int64)

    def to_list(self) -> List[List[int]]:
        return self.entries.astype(int).tolist()

    def __eq__(self, other) -> bool:
        if isinstance(other, IncidenceMatrix):
            return np.array_equal(self.entries, other.entries)
        return np.array_equal(self.entries, np.asarray(other))


@dataclass(frozen=True)
class SpanningTree:
    """生成树：n−1 条树边下标、根节点、父指针（节点 → (父节点, 边下标)）和 BFS 顺序。"""

    tree_edges: FrozenSet[int]
    root: Node
    parent: Mapping[Node, Tuple[Node, int]] = field(compare=False, hash=False)
    order: Tuple[Node, ...] = field(compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "tree_edges", frozenset(self.tree_edges))
        object.__setattr__(self, "parent", MappingProxyType(dict(self.parent)))
        object.__setattr__(self, "order", tuple(self.order))

    def contains(self, edge: int) -> bool:
        return edge in self.tree_edges

    def path_to_root(self, node: Node) -> List[Tuple[Node, int]]:
        """从 node 沿父指针走到根，返回 (经过的节点, 边下标) 序列。"""
        path = []
        while node != self.root:
            parent, edge = self.parent[node]
            path.append((node, edge))
            node = parent
        return path


@dataclass(frozen=True)
class CycleVector:
    """环的关联向量，分量取 −1/0/+1；chord 为对应的非树边（基本环时）。"""

    coeffs: Tuple[int, ...]
    chord: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))
        if any(x not in (-1, 0, 1) for x in self.coeffs):
            raise InvalidGraph("环向量的分量只能是 -1、0、+1")

    def __len__(self) -> int:
        return len(self.coeffs)

    def support(self) -> List[Tuple[int, int]]:
        """非零分量：(边下标, 方向)。"""
        return [(idx, sign) for idx, sign in enumerate(self.coeffs) if sign]

    @property
    def is_directed(self) -> bool:
        return all(sign >= 0 for sign in self.coeffs) and any(self.coeffs)

    def negated(self) -> "CycleVector":
        return CycleVector(tuple(-x for x in self.coeffs), self.chord)

