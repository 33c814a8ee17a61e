"""
批量实验脚本
============
复现工具箱的主要结论：等价反例、随机重标号、非负重标号、帧数守恒，
以及 bittide 开环/闭环仿真。每项实验打印结论，全部通过时返回 0。
"""
import os
import sys

import numpy as np

# 添加项目路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from lsnkit import configure
from lsnkit.errors import NegativeCycle
from lsnkit.models import BittideConfig, ClockModel, Digraph, Lsn, Relabeling
from lsnkit.services.bittide_service import BittideService
from lsnkit.services.equivalence_service import EquivalenceService
from lsnkit.services.graph_service import GraphService
from lsnkit.services.lsn_service import LsnService
from lsnkit.services.multiclock_service import MulticlockService


def random_connected_lsn(rng, n, max_latency=5):
    """随机生成连通的逻辑同步网络：先连一棵随机树，再随机加边。"""
    nodes = list(range(1, n + 1))
    edges = []
    for v in nodes[1:]:
        u = int(rng.integers(1, v))
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    for u in nodes:
        for v in nodes:
            if u != v and (u, v) not in edges and rng.random() < 0.3:
                edges.append((u, v))
    latencies = rng.integers(-max_latency, max_latency + 1, size=len(edges))
    return Lsn(Digraph(tuple(nodes), tuple(edges)), tuple(int(x) for x in latencies))


def ring(n):
    nodes = tuple(range(n))
    edges = []
    for i in nodes:
        for edge in ((i, (i + 1) % n), ((i + 1) % n, i)):
            if edge not in edges:
                edges.append(edge)
    return Digraph(nodes, tuple(edges))


def experiment_counterexample():
    a = Lsn.from_edges([1, 2, 3], [(1, 2, 3), (2, 3, 2), (3, 1, 1), (2, 1, 2), (3, 2, 2), (1, 3, 1)])
    b = a.with_latencies((1, 2, 1, 4, 2, 1))
    verdict = EquivalenceService.check_equivalence(a, b)
    print(f"  两两往返时间：{EquivalenceService.pairwise_round_trips(a)} / {EquivalenceService.pairwise_round_trips(b)}")
    print(f"  等价：{verdict.equivalent}，违反环上的带符号和：{verdict.signed_sums}")
    return not verdict.equivalent and verdict.signed_sums == (6, 4)


def experiment_relabel_roundtrip(rng, trials=1000):
    for _ in range(trials):
        a = random_connected_lsn(rng, int(rng.integers(2, 7)))
        c = Relabeling(tuple(int(x) for x in rng.integers(-10, 11, size=a.graph.n)))
        b = EquivalenceService.relabel(a, c)
        verdict = EquivalenceService.check_equivalence(a, b)
        if not verdict.equivalent or not EquivalenceService.verify_certificate(a, b, verdict.certificate):
            return False
    print(f"  {trials} 个随机网络全部判定为等价，证书可复现")
    return True


def experiment_nonnegative(rng, trials=200):
    done = 0
    while done < trials:
        a = random_connected_lsn(rng, int(rng.integers(2, 7)))
        if not GraphService.is_strongly_connected(a.graph):
            continue
        try:
            _c, relabeled, tree_edges = EquivalenceService.nonnegative_relabel(a)
        except NegativeCycle:
            continue
        if min(relabeled.latencies) < 0 or any(relabeled.latencies[idx] for idx in tree_edges):
            return False
        done += 1
    print(f"  {trials} 个强连通网络的非负重标号全部满足 λ̂ ≥ 0，树边为 0")
    return True


def experiment_conservation(rng, trials=50):
    for _ in range(trials):
        a = random_connected_lsn(rng, int(rng.integers(2, 6)))
        clocks = [ClockModel.constant(float(rng.uniform(0.5, 2.0)), float(rng.uniform(0, 1))) for _ in a.graph.nodes]
        net = MulticlockService.multiclock_from_lsn(a, clocks)
        for cycle in GraphService.directed_cycles(a.graph):
            counts = {MulticlockService.cycle_frame_count(net, cycle, t) for t in np.linspace(0, 50, 100)}
            if counts != {LsnService.directed_cycle_rtt(a, cycle)}:
                return False
    print(f"  {trials} 个随机多时钟网络上环内帧数恒定")
    return True


def experiment_bittide():
    ok = True
    for n in (2, 8):
        offsets = tuple(100.0 if i % 2 else -100.0 for i in range(n))
        for gain, horizon in ((0.0, 200_000), (2e-3, 100_000)):
            cfg = BittideConfig.with_defaults(
                ring(n), link_latency=5e-7, freq_offset_ppm=offsets, gain=gain,
                horizon_ticks=horizon, trace_mode="control",
            )
            trace = BittideService.simulate(cfg)
            low, high = min(trace.min_occupancy), max(trace.max_occupancy)
            result = "ok" if trace.verdict.ok else trace.verdict.fault_kind
            print(f"  环 n={n} 增益 {gain:g}：{result}，占用量 [{low}, {high}]，帧数守恒 {trace.census_ok}")
            expected_fault = gain == 0.0
            ok = ok and (trace.verdict.ok != expected_fault) and trace.census_ok
    return ok


def main():
    """运行全部实验的主函数"""
    configure(os.getenv("LSNKIT_ENV") or "production")
    rng = np.random.default_rng(20230101)

    experiments = [
        ("两两往返时间不足以判定等价", experiment_counterexample),
        ("随机重标号往返", lambda: experiment_relabel_roundtrip(rng)),
        ("非负重标号", lambda: experiment_nonnegative(rng)),
        ("环上帧数守恒", lambda: experiment_conservation(rng)),
        ("bittide 开环与闭环", experiment_bittide),
    ]

    failures = 0
    for title, experiment in experiments:
        print("=" * 50)
        print(title)
        print("=" * 50)
        try:
            passed = experiment()
        except Exception as e:
            print(f"\n实验失败: {e}")
            import traceback
            traceback.print_exc()
            passed = False
        print("通过" if passed else "未通过")
        failures += 0 if passed else 1

    print("\n" + "=" * 50)
    print(f"共 {len(experiments)} 项实验，{failures} 项未通过")
    print("=" * 50)
    return 0 if failures == 0 else 1


if __name__ == '__main__':
    exit(main())
