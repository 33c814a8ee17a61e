"""
check 命令：最小往返时间、正往返时间判定和扩展图窗口无环抽查
"""

from __future__ import annotations

from lsnkit import current_config
from lsnkit.cli.common import EXIT_NEGATIVE, EXIT_OK, fmt_bool
from lsnkit.services.lsn_service import LsnService
from lsnkit.utils.network_file import load_network


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="检查网络是否具有正往返时间")
    parser.add_argument("network", help="网络文件（JSON）")
    parser.add_argument(
        "--window",
        type=int,
        default=None,
        help="扩展图抽查窗口的半宽，默认取配置 WINDOW_SPOT_CHECK",
    )
    parser.set_defaults(handler=run)


def run(args, out) -> int:
    lsn = load_network(args.network).lsn

    best = LsnService.min_directed_cycle_rtt(lsn)
    positive = LsnService.has_positive_rtts(lsn)
    head = "no directed cycles" if best is None else f"min directed cycle RTT: {best}"
    print(f"{head}; positive RTTs: {fmt_bool(positive)}", file=out)

    if not positive:
        cycle = LsnService.nonpositive_cycle(lsn)
        rtt = LsnService.directed_cycle_rtt(lsn, cycle)
        kind = "zero" if rtt == 0 else "negative"
        print(f"{kind} cycle: {'->'.join(str(v) for v in cycle)} (RTT {rtt})", file=out)

    half = current_config().WINDOW_SPOT_CHECK if args.window is None else args.window
    window = LsnService.extended_window(lsn, -half, half)
    print(f"extended window [{-half},{half}] acyclic: {fmt_bool(LsnService.is_window_acyclic(window))}", file=out)
    return EXIT_OK if positive else EXIT_NEGATIVE
