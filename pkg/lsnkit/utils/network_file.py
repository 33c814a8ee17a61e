"""
网络文件读写工具
================
- JSON 格式的网络文件解析（带行号、列号的错误信息）
- 字段校验：节点唯一、端点已声明、λ 必须是整数
- 可选的 clocks / bittide 段转换为多时钟网络和仿真参数
- 输出文件可以原样重新解析（节点顺序、λ 精确保留）

文件格式::

    {
      "nodes": [1, 2, 3],
      "edges": [{"src": 1, "dst": 2, "lambda": 3}, ...],
      "clocks": {"1": {"omega0": 1.0, "offset_ppm": 0, "phase0": 0.0,
                       "segments": [[0.0, 1.0], [5.0, 1.1]]}},
      "bittide": {"link_latency": 5e-7, "setpoint": 8, "gain": 0.002, ...}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from lsnkit.errors import LsnError, NetworkFileError
from lsnkit.models.bittide import BittideConfig
from lsnkit.models.clock import ClockModel, MulticlockNetwork
from lsnkit.models.graph import Node
from lsnkit.models.network import Lsn

# bittide 段中的键 → BittideConfig 字段
_BITTIDE_KEYS = {
    "link_latency": "link_latency",
    "base_freq": "base_freq",
    "freq_offset_ppm": "freq_offset_ppm",
    "setpoint": "buffer_setpoint",
    "buffer_setpoint": "buffer_setpoint",
    "capacity": "buffer_capacity",
    "buffer_capacity": "buffer_capacity",
    "gain": "gain",
    "control_period": "control_period",
    "horizon_ticks": "horizon_ticks",
    "freq_bounds": "freq_bounds",
    "observe_mode": "observe_mode",
    "trace_mode": "trace_mode",
}


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


@dataclass
class NetworkDocument:
    """解析后的网络文件：逻辑同步网络加原样保留的 clocks / bittide 段。"""

    lsn: Lsn
    clocks: Optional[Dict[str, Dict[str, Any]]] = None
    bittide: Optional[Dict[str, Any]] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def clock_entry(self, node: Node) -> Dict[str, Any]:
        if not self.clocks or str(node) not in self.clocks:
            raise NetworkFileError(f"clocks 段缺少节点 {node}")
        return self.clocks[str(node)]

    def multiclock(self) -> MulticlockNetwork:
        """
        由 clocks 段构造多时钟网络

        每个节点给出 omega0、offset_ppm（默认 0）、phase0（默认 0）；给出
        segments 时按分段线性时钟处理，忽略 omega0 和 offset_ppm。
        """
        if not self.clocks:
            raise NetworkFileError("多时钟模式需要 clocks 段")
        clocks = []
        for node in self.lsn.graph.nodes:
            entry = self.clock_entry(node)
            phase0 = float(entry.get("phase0", 0.0))
            try:
                if "segments" in entry:
                    clocks.append(ClockModel(tuple((t, w) for t, w in entry["segments"]), phase0))
                else:
                    omega = float(entry["omega0"]) * (1.0 + float(entry.get("offset_ppm", 0.0)) * 1e-6)
                    clocks.append(ClockModel.constant(omega, phase0))
            except (KeyError, TypeError, ValueError) as exc:
                if isinstance(exc, LsnError):
                    raise
                raise NetworkFileError(f"节点 {node} 的时钟参数无效：{exc}") from exc
        return MulticlockNetwork(self.lsn.graph, tuple(clocks), self.lsn.latencies)

    def bittide_config(self, **overrides) -> BittideConfig:
        """
        由 bittide 段（以及 clocks 段中的 omega0 / offset_ppm）构造仿真参数，
        缺省值取自当前配置，overrides 优先。
        """
        g = self.lsn.graph
        params: Dict[str, Any] = {}
        if self.clocks:
            nominal = [self._nominal_frequency(node) for node in g.nodes]
            params["base_freq"] = tuple(omega for omega, _ppm in nominal)
            params["freq_offset_ppm"] = tuple(ppm for _omega, ppm in nominal)
        for key, value in (self.bittide or {}).items():
            if key not in _BITTIDE_KEYS:
                raise NetworkFileError(f"bittide 段中有未知字段 {key}")
            params[_BITTIDE_KEYS[key]] = self._per_edge(value) if key == "link_latency" else value
        params.update({k: v for k, v in overrides.items() if v is not None})
        return BittideConfig.with_defaults(g, **params)

    def _nominal_frequency(self, node: Node) -> Tuple[float, float]:
        """
        仿真用的标称频率和偏差

        优先取 omega0 / offset_ppm；只给出 segments 时取第一段的频率，偏差为 0。

        Raises:
            NetworkFileError: 两者都没有，或取值无效
        """
        entry = self.clock_entry(node)
        try:
            if "omega0" in entry:
                return float(entry["omega0"]), float(entry.get("offset_ppm", 0.0))
            if entry.get("segments"):
                return float(entry["segments"][0][1]), 0.0
        except (TypeError, ValueError, IndexError) as exc:
            raise NetworkFileError(f"节点 {node} 的时钟参数无效：{exc}") from exc
        raise NetworkFileError(f"节点 {node} 的时钟缺少 omega0 或 segments")

    def _per_edge(self, value: Any) -> Any:
        """link_latency 可以是单个数、按边顺序的列表，或以 "src->dst" 为键的对象。"""
        if isinstance(value, dict):
            g = self.lsn.graph
            labels = [g.edge_label(idx) for idx in range(g.m)]
            missing = [label for label in labels if label not in value]
            if missing:
                raise NetworkFileError(f"link_latency 缺少边 {', '.join(missing)}")
            return tuple(float(value[label]) for label in labels)
        return value


def parse_network(text: str) -> NetworkDocument:
    """
    解析网络文件文本

    Raises:
        NetworkFileError: JSON 语法错误（带行列号）或字段不合法
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFileError(f"JSON 解析失败：{exc.msg}", exc.lineno, exc.colno) from exc

    if not isinstance(data, dict):
        raise NetworkFileError("网络文件顶层必须是对象")
    missing = [key for key in ("nodes", "edges") if key not in data]
    if missing:
        raise NetworkFileError(f"缺少必需字段: {', '.join(missing)}")

    nodes = data["nodes"]
    if not isinstance(nodes, list) or not nodes:
        raise NetworkFileError("nodes 必须是非空数组")
    for node in nodes:
        if not (_is_int(node) or isinstance(node, str)):
            raise NetworkFileError(f"节点编号只能是整数或字符串，收到 {node!r}")

    edges = data["edges"]
    if not isinstance(edges, list):
        raise NetworkFileError("edges 必须是数组")
    triples = []
    for position, edge in enumerate(edges):
        if not isinstance(edge, dict):
            raise NetworkFileError(f"第 {position} 条边必须是对象")
        absent = [key for key in ("src", "dst", "lambda") if key not in edge]
        if absent:
            raise NetworkFileError(f"第 {position} 条边缺少必需字段: {', '.join(absent)}")
        if not _is_int(edge["lambda"]):
            raise NetworkFileError(f"第 {position} 条边的 lambda 必须是整数，收到 {edge['lambda']!r}")
        triples.append((edge["src"], edge["dst"], edge["lambda"]))

    try:
        lsn = Lsn.from_edges(nodes, triples)
    except LsnError as exc:
        raise NetworkFileError(str(exc)) from exc

    clocks = data.get("clocks")
    if clocks is not None:
        if not isinstance(clocks, dict):
            raise NetworkFileError("clocks 必须是对象")
        for key, entry in clocks.items():
            if not isinstance(entry, dict):
                raise NetworkFileError(f"节点 {key} 的时钟参数必须是对象")
            if "segments" not in entry and not _is_number(entry.get("omega0")):
                raise NetworkFileError(f"节点 {key} 的时钟缺少 omega0")

    bittide = data.get("bittide")
    if bittide is not None and not isinstance(bittide, dict):
        raise NetworkFileError("bittide 必须是对象")

    extra = {k: v for k, v in data.items() if k not in ("nodes", "edges", "clocks", "bittide")}
    return NetworkDocument(lsn=lsn, clocks=clocks, bittide=bittide, extra=extra)


def load_network(path: Union[str, Path]) -> NetworkDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkFileError(f"无法读取网络文件 {path}：{exc.strerror}") from exc
    return parse_network(text)


def network_to_dict(doc: NetworkDocument) -> Dict[str, Any]:
    g = doc.lsn.graph
    data: Dict[str, Any] = {
        "nodes": list(g.nodes),
        "edges": [
            {"src": src, "dst": dst, "lambda": lam} for (src, dst), lam in zip(g.edges, doc.lsn.latencies)
        ],
    }
    if doc.clocks is not None:
        data["clocks"] = doc.clocks
    if doc.bittide is not None:
        data["bittide"] = doc.bittide
    data.update(doc.extra)
    return data


def dump_network(doc: Union[NetworkDocument, Lsn]) -> str:
    if isinstance(doc, Lsn):
        doc = NetworkDocument(lsn=doc)
    return json.dumps(network_to_dict(doc), indent=2, ensure_ascii=False) + "\n"


def save_network(path: Union[str, Path], doc: Union[NetworkDocument, Lsn]) -> None:
    Path(path).write_text(dump_network(doc), encoding="utf-8")


def replace_latencies(doc: NetworkDocument, lsn: Lsn) -> NetworkDocument:
    """保留 clocks / bittide 段，只替换逻辑时延。"""
    return NetworkDocument(lsn=lsn, clocks=doc.clocks, bittide=doc.bittide, extra=dict(doc.extra))


__all__: List[str] = [
    "NetworkDocument",
    "dump_network",
    "load_network",
    "network_to_dict",
    "parse_network",
    "replace_latencies",
    "save_network",
]
