"""
invariants 命令：输出环上的带符号时延和（重标号不变量）
"""

from __future__ import annotations

from lsnkit.cli.common import EXIT_OK, fmt_cycle, parse_node_list
from lsnkit.services.equivalence_service import EquivalenceService
from lsnkit.services.graph_service import GraphService
from lsnkit.utils.network_file import load_network


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "invariants",
        help="环上的带符号时延和；三角形即 receive(B) − receive(A)，菱形即两组接收差之差",
    )
    parser.add_argument("network")
    parser.add_argument("--cycle", help="闭合节点序列，例如 1,2,3,1；缺省时输出全部基本环")
    parser.set_defaults(handler=run)


def run(args, out) -> int:
    lsn = load_network(args.network).lsn
    g = lsn.graph

    if args.cycle:
        walk = parse_node_list(g, args.cycle)
        print(EquivalenceService.cycle_invariant(lsn, walk), file=out)
        return EXIT_OK

    tree = GraphService.spanning_tree(g)
    for z in GraphService.fundamental_cycles(g, tree):
        print(f"{fmt_cycle(g, z)}: {EquivalenceService.cycle_invariant(lsn, z)}", file=out)
    return EXIT_OK
