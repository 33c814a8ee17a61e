"""
命令行公共部分：退出码、节点列表解析和向量格式化
"""

from __future__ import annotations

import re
from typing import Iterable, List, Sequence

from lsnkit.errors import InvalidGraph
from lsnkit.models.graph import CycleVector, Digraph, Node

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_FAULT = 3

# 值可能以负数开头的列表选项
LIST_OPTIONS = ("--c", "--tree", "--cycle")
_LIST_VALUE = re.compile(r"^-\d+(,[^,]*)*$")


def fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def fmt_vector(values: Iterable) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


def fmt_cycle(g: Digraph, z: CycleVector) -> str:
    """环向量写成 "+1->2 -3->2" 的形式。"""
    return " ".join(("+" if sign > 0 else "-") + g.edge_label(idx) for idx, sign in z.support())


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(token) for token in text.replace(" ", "").split(",") if token]
    except ValueError as exc:
        raise InvalidGraph(f"无法解析整数列表 {text!r}") from exc


def parse_node_list(g: Digraph, text: str) -> List[Node]:
    """按节点的字符串形式查找，"1,2,3,1" 或 "a,b,a"。"""
    by_name = {str(node): node for node in g.nodes}
    nodes = []
    for token in text.replace(" ", "").split(","):
        if not token:
            continue
        if token not in by_name:
            raise InvalidGraph(f"图中没有节点 {token}")
        nodes.append(by_name[token])
    return nodes


def attach_list_values(argv: Sequence[str], options: Sequence[str] = LIST_OPTIONS) -> List[str]:
    """
    把 "--c -1,2,3" 改写成 "--c=-1,2,3"

    argparse 只把形如 "-1" 的参数当作负数，"-1,2,3" 会被当成未知选项。
    """
    result: List[str] = []
    for token in argv:
        if result and result[-1] in options and _LIST_VALUE.match(token):
            result[-1] = f"{result[-1]}={token}"
        else:
            result.append(token)
    return result
