"""
equiv 命令：判定两个网络是否等价
"""

from __future__ import annotations

from lsnkit.cli.common import EXIT_NEGATIVE, EXIT_OK, fmt_cycle, fmt_vector
from lsnkit.services.equivalence_service import EquivalenceService
from lsnkit.utils.network_file import load_network


def register(subparsers) -> None:
    parser = subparsers.add_parser("equiv", help="判定两个网络是否等价")
    parser.add_argument("network_a")
    parser.add_argument("network_b")
    parser.set_defaults(handler=run)


def run(args, out) -> int:
    a = load_network(args.network_a).lsn
    b = load_network(args.network_b).lsn
    verdict = EquivalenceService.check_equivalence(a, b)

    if verdict.equivalent:
        print(f"equivalent; c = {fmt_vector(verdict.certificate.offsets)}", file=out)
        return EXIT_OK

    print(f"not equivalent; y = {fmt_vector(verdict.difference)}", file=out)
    first, second = verdict.signed_sums
    print(f"violating cycle: {fmt_cycle(a.graph, verdict.violating_cycle)}", file=out)
    print(f"signed sums: {first} vs {second}", file=out)
    return EXIT_NEGATIVE
