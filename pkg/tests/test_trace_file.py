"""
轨迹文件读写与重放测试
"""

import pytest

from lsnkit.errors import InsufficientData, NetworkFileError
from lsnkit.models import BittideConfig
from lsnkit.models.bittide import CONTROL, POP
from lsnkit.services.bittide_service import BittideService
from lsnkit.services.multiclock_service import MulticlockService
from lsnkit.utils.trace_file import (
    TRACE_COLUMNS,
    control_series,
    is_time_ordered,
    read_trace,
    records_to_frame,
    replay_occupancy,
    write_trace,
)
from tests.helpers import ring


@pytest.fixture
def full_trace():
    cfg = BittideConfig.with_defaults(
        ring(2), link_latency=5e-7, freq_offset_ppm=(-100.0, 100.0), horizon_ticks=2500, trace_mode="full"
    )
    return BittideService.simulate(cfg)


class TestWriteRead:
    def test_header_and_rows(self, full_trace, tmp_path):
        path = tmp_path / "trace.csv"
        rows = write_trace(path, full_trace.records, full_trace.config.graph)
        assert rows == len(full_trace.records)
        assert path.read_text().splitlines()[0] == ",".join(TRACE_COLUMNS)

        frame = read_trace(path)
        assert len(frame) == rows
        assert set(frame["kind"]) == {"send", "arrive", "pop", CONTROL}
        assert set(frame["edge"].dropna()) == {"0->1", "1->0"}
        assert frame.loc[frame["kind"] == CONTROL, "frame"].isna().all()
        assert is_time_ordered(frame)

    def test_control_series(self, full_trace, tmp_path):
        path = tmp_path / "trace.csv"
        write_trace(path, full_trace.records, full_trace.config.graph)
        controls = control_series(read_trace(path))
        assert len(controls) == 4
        assert list(controls.columns) == ["t", "node", "omega", "occupancy"]

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,node,kind\n0.1,1,pop\n")
        with pytest.raises(NetworkFileError):
            read_trace(path)


class TestReplay:
    def test_simulated_trace_is_consistent(self, full_trace):
        frame = records_to_frame(full_trace.records, full_trace.config.graph)
        assert replay_occupancy(frame) == []

    def test_sampled_trace_is_consistent(self, triangle, tmp_path):
        net = MulticlockService.synchronous_realization(triangle)
        records = MulticlockService.sample_trace(net, 0.0, 10.0)
        path = tmp_path / "sampled.csv"
        write_trace(path, records, triangle.graph)
        assert replay_occupancy(read_trace(path)) == []

    def test_tampered_occupancy_is_reported(self, full_trace):
        frame = records_to_frame(full_trace.records, full_trace.config.graph)
        row = frame.index[frame["kind"] == POP][10]
        frame.loc[row, "occupancy"] += 3
        mismatches = replay_occupancy(frame)
        assert mismatches
        assert mismatches[0][0] == row

    def test_control_only_trace(self):
        cfg = BittideConfig.with_defaults(ring(2), link_latency=5e-7, horizon_ticks=2000, trace_mode="control")
        frame = records_to_frame(BittideService.simulate(cfg).records, cfg.graph)
        with pytest.raises(InsufficientData):
            replay_occupancy(frame)
