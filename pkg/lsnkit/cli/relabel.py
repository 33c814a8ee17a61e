"""
relabel 命令：按给定 c、非负重标号或生成树目标时延重写网络文件
"""

from __future__ import annotations

import sys

from lsnkit.cli.common import EXIT_OK, fmt_vector, parse_int_list
from lsnkit.models.network import Relabeling
from lsnkit.services.equivalence_service import EquivalenceService
from lsnkit.services.graph_service import GraphService
from lsnkit.utils.network_file import dump_network, load_network, replace_latencies, save_network


def register(subparsers) -> None:
    parser = subparsers.add_parser("relabel", help="对网络重标号，输出等价的新网络")
    parser.add_argument("network")
    mode = parser.add_mutually_exclusive_group(required=True)
    mode.add_argument("--nonneg", action="store_true", help="非负重标号（最短路径树上时延为 0）")
    mode.add_argument("--c", dest="offsets", metavar="C1,C2,...", help="按节点顺序给出的重标号向量，可以为负")
    mode.add_argument(
        "--tree", metavar="G1,G2,...", help="生成树边（按边下标升序）上的目标时延"
    )
    parser.add_argument("--out", help="输出文件，缺省写到标准输出")
    parser.set_defaults(handler=run)


def run(args, out) -> int:
    doc = load_network(args.network)
    lsn = doc.lsn

    if args.nonneg:
        c, relabeled, tree_edges = EquivalenceService.nonnegative_relabel(lsn)
        labels = ", ".join(lsn.graph.edge_label(idx) for idx in tree_edges)
        print(f"shortest-path tree: {labels}", file=out if args.out else sys.stderr)
    elif args.offsets is not None:
        c = Relabeling(parse_int_list(args.offsets))
        relabeled = EquivalenceService.relabel(lsn, c)
    else:
        tree = GraphService.spanning_tree(lsn.graph)
        gamma = EquivalenceService.parse_gamma(tree, parse_int_list(args.tree))
        c = EquivalenceService.relabel_tree_to(lsn, tree, gamma)
        relabeled = EquivalenceService.relabel(lsn, c)

    result = replace_latencies(doc, relabeled)
    if args.out:
        save_network(args.out, result)
        print(f"c = {fmt_vector(c.offsets)}", file=out)
    else:
        # 标准输出留给网络文件本身
        print(f"c = {fmt_vector(c.offsets)}", file=sys.stderr)
        out.write(dump_network(result))
    return EXIT_OK

