"""
逻辑同步网络模型
================
- Lsn：有向图加每条边的整数逻辑时延（单位 localtick，可以为负）
- 扩展图中的事件与有限窗口
- 重标号向量与等价判定结果
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from numbers import Integral
from typing import Dict, Optional, Sequence, Tuple

import networkx as nx

from lsnkit.errors import InvalidGraph
from lsnkit.models.graph import CycleVector, Digraph, Node

COMPUTATIONAL = "computational"
COMMUNICATION = "communication"


def _as_int_tuple(values: Sequence, what: str) -> Tuple[int, ...]:
    result = []
    for value in values:
        if isinstance(value, bool) or not isinstance(value, Integral):
            raise InvalidGraph(f"{what}必须是整数，收到 {value!r}")
        result.append(int(value))
    return tuple(result)


@dataclass(frozen=True)
class Lsn:
    """逻辑同步网络。latencies[e] 是第 e 条边的逻辑时延 λ。"""

    graph: Digraph
    latencies: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "latencies", _as_int_tuple(self.latencies, "逻辑时延"))
        if len(self.latencies) != self.graph.m:
            raise InvalidGraph(
                f"逻辑时延个数 {len(self.latencies)} 与边数 {self.graph.m} 不一致"
            )

    @classmethod
    def from_edges(cls, nodes: Sequence[Node], weighted_edges: Sequence[Tuple[Node, Node, int]]) -> "Lsn":
        """由 (src, dst, λ) 三元组构造。"""
        graph = Digraph(tuple(nodes), tuple((src, dst) for src, dst, _ in weighted_edges))
        return cls(graph, tuple(lam for _, _, lam in weighted_edges))

    def latency(self, src: Node, dst: Node) -> int:
        return self.latencies[self.graph.edge_index[(src, dst)]]

    def with_latencies(self, latencies: Sequence[int]) -> "Lsn":
        return Lsn(self.graph, tuple(latencies))

    @cached_property
    def as_dict(self) -> Dict[Tuple[Node, Node], int]:
        return dict(zip(self.graph.edges, self.latencies))


@dataclass(frozen=True, order=True)
class ExtendedEvent:
    """扩展图中的事件 (i, τ)。"""

    node: Node
    tick: int

    def __str__(self) -> str:
        return f"({self.node},{self.tick})"


@dataclass(frozen=True)
class ExtendedWindow:
    """扩展图在 lo ≤ τ ≤ hi 范围内的有限切片。"""

    lo: int
    hi: int
    events: Tuple[ExtendedEvent, ...]
    edges: Tuple[Tuple[ExtendedEvent, ExtendedEvent, str], ...]

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.events)
        for src, dst, kind in self.edges:
            graph.add_edge(src, dst, kind=kind)
        return graph

    def contains(self, event: ExtendedEvent) -> bool:
        return self.lo <= event.tick <= self.hi

    def edges_of_kind(self, kind: str):
        return [(src, dst) for src, dst, k in self.edges if k == kind]


@dataclass(frozen=True)
class Relabeling:
    """重标号向量 c，按图的节点顺序排列。"""

    offsets: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "offsets", _as_int_tuple(self.offsets, "重标号"))

    @classmethod
    def zero(cls, n: int) -> "Relabeling":
        return cls((0,) * n)

    def __len__(self) -> int:
        return len(self.offsets)

    def __getitem__(self, idx: int) -> int:
        return self.offsets[idx]

    def normalized(self, root_index: int = 0) -> "Relabeling":
        """平移使 c_root = 0；等价类对整体加常数不变。"""
        shift = self.offsets[root_index]
        return Relabeling(tuple(c - shift for c in self.offsets))

    def as_dict(self, graph: Digraph) -> Dict[Node, int]:
        return dict(zip(graph.nodes, self.offsets))


@dataclass(frozen=True)
class EquivalenceVerdict:
    """
    等价判定结果。

    equivalent 为真时 certificate 满足 λ − λ̂ = Bᵀc；为假时 violating_cycle 是
    一个基本环，signed_sums 给出两个网络在该环上的带符号时延和。
    difference 即 y = λ − λ̂。
    """

    equivalent: bool
    difference: Tuple[int, ...]
    certificate: Optional[Relabeling] = None
    violating_cycle: Optional[CycleVector] = None
    signed_sums: Optional[Tuple[int, int]] = None
