"""
图表生成工具
- 弹性缓冲区占用量随时间变化
- 节点频率（相对标称值的 ppm 偏差）随时间变化
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from lsnkit.models.bittide import POP, SimTrace  # noqa: E402

logger = logging.getLogger(__name__)


def plot_simulation(trace: SimTrace, path: Union[str, Path]) -> Path:
    """
    绘制仿真结果并保存为图片

    上图为每条边 pop 之后的占用量（需要 full 轨迹），下图为每个节点的频率
    断点，换算成相对 base_freq 的 ppm。
    """
    cfg = trace.config
    g = cfg.graph
    fig, (ax_occ, ax_freq) = plt.subplots(2, 1, figsize=(10, 7), sharex=True)

    pops = {}
    for record in trace.records:
        if record.kind == POP:
            pops.setdefault(record.edge, ([], []))
            pops[record.edge][0].append(record.t)
            pops[record.edge][1].append(record.occupancy)
    for idx, (ts, occ) in sorted(pops.items()):
        ax_occ.step(ts, occ, where="post", label=g.edge_label(idx), linewidth=0.8)
    if not pops:
        ax_occ.text(0.5, 0.5, "no pop events in trace", ha="center", va="center", transform=ax_occ.transAxes)
    ax_occ.set_ylabel("buffer occupancy (frames)")
    if 0 < len(pops) <= 16:
        ax_occ.legend(fontsize="small", ncol=2)

    for i, node in enumerate(g.nodes):
        base = cfg.base_freq[i]
        points = trace.breakpoints[i] if i < len(trace.breakpoints) else []
        ts = [t for t, _tick, _omega in points] + [trace.end_time]
        ppm = [(omega / base - 1.0) * 1e6 for _t, _tick, omega in points]
        if ppm:
            ax_freq.step(ts, ppm + ppm[-1:], where="post", label=str(node), linewidth=0.8)
    ax_freq.set_xlabel("wall-clock time (s)")
    ax_freq.set_ylabel("frequency offset (ppm)")
    if g.n <= 16:
        ax_freq.legend(fontsize="small", ncol=2)

    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    logger.info("图表已保存到 %s", path)
    return path
