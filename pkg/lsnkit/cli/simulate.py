"""
simulate 命令：多时钟模型的可实现性检查，或 bittide 闭环仿真
"""

from __future__ import annotations

import numpy as np

from lsnkit.cli.common import EXIT_FAULT, EXIT_OK, fmt_bool
from lsnkit.errors import InsufficientData
from lsnkit.services.bittide_service import BittideService
from lsnkit.services.graph_service import GraphService
from lsnkit.services.multiclock_service import MulticlockService
from lsnkit.utils.chart_generator import plot_simulation
from lsnkit.utils.network_file import load_network
from lsnkit.utils.trace_file import write_trace

# 多时钟模式下缺省的检查区间（墙钟秒）
DEFAULT_MULTICLOCK_HORIZON = 20.0
CYCLE_SAMPLES = 100


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="运行多时钟模型或 bittide 仿真")
    parser.add_argument("network")
    parser.add_argument("--mode", choices=("multiclock", "bittide"), default="multiclock")
    parser.add_argument(
        "--horizon",
        type=float,
        default=None,
        help="multiclock：检查区间 [0, H] 的墙钟秒数；bittide：仿真的 tick 数",
    )
    parser.add_argument(
        "--numax",
        type=int,
        default=None,
        help="multiclock：占用量上界 ν_max（缺省取最大 λ）；bittide：弹性缓冲区容量",
    )
    parser.add_argument("--trace", help="写出轨迹 CSV")
    parser.add_argument("--plot", help="bittide 模式下把占用量和频率画成图片")
    parser.set_defaults(handler=run)


def run(args, out) -> int:
    doc = load_network(args.network)
    if args.mode == "bittide":
        return _run_bittide(doc, args, out)
    return _run_multiclock(doc, args, out)


def _run_multiclock(doc, args, out) -> int:
    lsn = doc.lsn
    net = doc.multiclock() if doc.clocks else MulticlockService.synchronous_realization(lsn)
    horizon = DEFAULT_MULTICLOCK_HORIZON if args.horizon is None else float(args.horizon)
    nu_max = args.numax if args.numax is not None else max(max(lsn.latencies, default=1), 1)

    verdict = MulticlockService.check_realizability(net, (0.0, horizon), nu_max)
    low, high = verdict.nu_range
    print(
        f"realizable on [0,{horizon:g}] with nu_max {nu_max}: {fmt_bool(verdict.ok)} "
        f"(occupancy in [{low},{high}], bounded horizon)",
        file=out,
    )
    for cycle in verdict.zero_cycles:
        print(f"warning: zero round-trip cycle {'->'.join(str(v) for v in cycle)}", file=out)

    g = lsn.graph
    for idx in range(g.m):
        k = int(net.clocks[g.node_index[g.edges[idx][0]]].floor_phase(horizon / 2))
        measured = MulticlockService.measure_logical_latency(net, idx, k)
        print(f"latency {g.edge_label(idx)}: {measured} (configured {lsn.latencies[idx]})", file=out)

    times = np.linspace(0.0, horizon, CYCLE_SAMPLES)
    for cycle in GraphService.directed_cycles(g):
        counts = {MulticlockService.cycle_frame_count(net, cycle, t) for t in times}
        label = "->".join(str(v) for v in cycle)
        print(f"cycle {label}: frames {sorted(counts)} constant: {fmt_bool(len(counts) == 1)}", file=out)

    if args.trace:
        rows = write_trace(args.trace, MulticlockService.sample_trace(net, 0.0, horizon), g)
        print(f"trace: {rows} rows written to {args.trace}", file=out)

    if verdict.ok:
        return EXIT_OK
    first = verdict.first_violation
    kind = "underflow" if first.occupancy < 0 else "overflow"
    print(
        f"{kind} on edge {g.edge_label(first.edge)} at t={first.t:.9g} (occupancy {first.occupancy})",
        file=out,
    )
    return EXIT_FAULT


def _run_bittide(doc, args, out) -> int:
    overrides = {"trace_mode": "full" if (args.trace or args.plot) else "none"}
    if args.horizon is not None:
        overrides["horizon_ticks"] = int(args.horizon)
    if args.numax is not None:
        overrides["buffer_capacity"] = args.numax
    cfg = doc.bittide_config(**overrides)
    g = cfg.graph

    trace = BittideService.simulate(cfg)
    verdict = trace.verdict
    status = "ok" if verdict.ok else verdict.fault_kind
    print(f"bittide: {status} after ticks {tuple(trace.ticks)} at t={trace.end_time:.9g}", file=out)

    for idx in range(g.m):
        implied = trace.implied_latencies[idx]
        try:
            measured = BittideService.trace_logical_latency(trace, idx)
        except InsufficientData:
            measured = trace.observed_latencies.get(idx, implied)
        print(
            f"latency {g.edge_label(idx)}: {measured} (implied {implied}); "
            f"occupancy [{trace.min_occupancy[idx]},{trace.max_occupancy[idx]}]",
            file=out,
        )
    for cycle, count in trace.cycle_census.items():
        print(f"cycle {'->'.join(str(v) for v in cycle)}: frames {count}", file=out)
    print(f"frame census constant: {fmt_bool(trace.census_ok)}", file=out)

    if args.trace:
        rows = write_trace(args.trace, trace.records, g)
        print(f"trace: {rows} rows written to {args.trace}", file=out)
    if args.plot:
        plot_simulation(trace, args.plot)

    if not verdict.ok:
        print(f"{verdict.fault_kind} at t={verdict.fault_time:.9g} on edge {g.edge_label(verdict.fault_edge)}",
              file=out)
    # 故障时抛出 BufferFault，由入口统一映射为退出码 3
    trace.raise_for_verdict()
    return EXIT_OK
