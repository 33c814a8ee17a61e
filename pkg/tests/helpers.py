"""
测试用的随机实例生成器和暴力判定
"""

from collections import deque

from lsnkit.models import Digraph, Lsn


def random_connected_graph(rng, n, density=0.3):
    """先连一棵随机树（方向随机），再以 density 的概率补充其余有向边。"""
    nodes = list(range(1, n + 1))
    edges = []
    for v in nodes[1:]:
        u = int(rng.integers(1, v))
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    for u in nodes:
        for v in nodes:
            if u != v and (u, v) not in edges and rng.random() < density:
                edges.append((u, v))
    return Digraph(tuple(nodes), tuple(edges))


def random_strongly_connected_graph(rng, n, density=0.3):
    """有向环 1→2→…→n→1 加随机边，必然强连通。"""
    nodes = list(range(1, n + 1))
    edges = [(nodes[i], nodes[(i + 1) % n]) for i in range(n)] if n > 1 else []
    for u in nodes:
        for v in nodes:
            if u != v and (u, v) not in edges and rng.random() < density:
                edges.append((u, v))
    return Digraph(tuple(nodes), tuple(edges))


def random_latencies(rng, m, low=-5, high=5):
    return tuple(int(x) for x in rng.integers(low, high + 1, size=m))


def random_lsn(rng, n, low=-5, high=5, density=0.3):
    g = random_connected_graph(rng, n, density)
    return Lsn(g, random_latencies(rng, g.m, low, high))


def ring(n):
    """双向环；n = 2 时只有一对反向边。"""
    nodes = tuple(range(n))
    edges = []
    for i in nodes:
        for edge in ((i, (i + 1) % n), ((i + 1) % n, i)):
            if edge not in edges:
                edges.append(edge)
    return Digraph(nodes, tuple(edges))


def brute_force_equivalent(a, b, bound=20):
    """
    在 c ∈ [−bound, bound]ⁿ、c_root = 0 中回溯搜索重标号。

    按广度优先顺序给节点赋值，两端都已赋值的边立即检查，返回找到的 c 或 None。
    """
    g = a.graph
    index = g.node_index
    order, seen = [], set()
    for start in g.nodes:
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            node = queue.popleft()
            order.append(node)
            for idx in g.incident_edges[node]:
                src, dst = g.edges[idx]
                other = dst if src == node else src
                if other not in seen:
                    seen.add(other)
                    queue.append(other)

    c = {}

    def consistent(node):
        for idx in g.incident_edges[node]:
            src, dst = g.edges[idx]
            if src in c and dst in c:
                if b.latencies[idx] != a.latencies[idx] + c[dst] - c[src]:
                    return False
        return True

    def search(position):
        if position == len(order):
            return True
        node = order[position]
        candidates = [0] if position == 0 else range(-bound, bound + 1)
        for value in candidates:
            c[node] = value
            if consistent(node) and search(position + 1):
                return True
            del c[node]
        return False

    if search(0):
        return tuple(c[node] for node in g.nodes)
    return None
