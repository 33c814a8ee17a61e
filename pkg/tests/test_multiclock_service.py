"""
多时钟网络服务测试
"""

import logging
from itertools import groupby

import numpy as np
import pytest

from lsnkit.errors import BadHorizon, InvalidGraph, NegativeLatency, PreconditionViolated
from lsnkit.models import ClockModel, Lsn
from lsnkit.models.bittide import ARRIVE, POP, SEND
from lsnkit.services.graph_service import GraphService
from lsnkit.services.lsn_service import LsnService
from lsnkit.services.multiclock_service import MulticlockService
from tests.helpers import random_latencies, random_strongly_connected_graph


def random_clock(rng):
    start = float(rng.uniform(-5, 0))
    times = start + rng.uniform(0.5, 20, size=3).cumsum()
    segments = [(start, float(rng.uniform(0.5, 2.0)))]
    segments += [(float(t), float(rng.uniform(0.5, 2.0))) for t in times]
    return ClockModel(tuple(segments), float(rng.uniform(-3, 3)))


def drift_pair(omega_j=1.1, lam=4):
    lsn = Lsn.from_edges(["i", "j"], [("i", "j", lam)])
    return MulticlockService.multiclock_from_lsn(lsn, [ClockModel.constant(1.0), ClockModel.constant(omega_j)])


class TestClock:
    def test_constant(self):
        clock = ClockModel.constant(2.0, phase0=0.5)
        assert MulticlockService.phase_at(clock, 1.0) == pytest.approx(2.5)
        assert MulticlockService.tick_time(clock, 3) == pytest.approx(1.25)

    def test_piecewise(self):
        clock = ClockModel(((0.0, 1.0), (10.0, 2.0)))
        assert clock.phase_at(12.0) == pytest.approx(14.0)
        assert clock.tick_time(14) == pytest.approx(12.0)
        assert clock.phase_at(-1.0) == pytest.approx(-1.0)
        assert clock.frequency_at(3.0) == 1.0
        assert clock.frequency_at(10.0) == 2.0

    def test_inverse(self, rng):
        for _ in range(50):
            clock = random_clock(rng)
            k = int(rng.integers(-10, 60))
            assert clock.phase_at(clock.tick_time(k)) == pytest.approx(k, abs=1e-9)

    def test_floor_on_tick(self):
        clock = ClockModel.constant(1.1)
        assert clock.floor_phase(45 / 1.1) == 45
        assert clock.floor_phase(45 / 1.1 - 1e-3) == 44

    @pytest.mark.parametrize("segments", [(), ((0.0, 1.0), (0.0, 2.0)), ((0.0, 0.0),)])
    def test_invalid(self, segments):
        with pytest.raises(InvalidGraph):
            ClockModel(segments)


class TestFifo:
    def test_identity_clocks(self, triangle):
        net = MulticlockService.synchronous_realization(triangle)
        assert MulticlockService.fifo_bounds(net, (2, 3), 5.0) == (3, 5)
        assert MulticlockService.occupancy(net, 1, 5.0) == 3
        snap = MulticlockService.snapshot(net, (1, 3), 7.3)
        assert (snap.alpha, snap.beta, snap.occupancy) == (4, 7, 4)

    def test_latency_is_constant(self, rng):
        for _ in range(1000):
            lam = int(rng.integers(-5, 6))
            lsn = Lsn.from_edges([1, 2], [(1, 2, lam)])
            net = MulticlockService.multiclock_from_lsn(lsn, [random_clock(rng), random_clock(rng)])
            k = int(rng.integers(-20, 40))
            assert MulticlockService.measure_logical_latency(net, 0, k) == lam

    def test_occupancy_constant_between_ticks(self, rng):
        for _ in range(200):
            lam = int(rng.integers(-3, 6))
            lsn = Lsn.from_edges([1, 2], [(1, 2, lam)])
            clocks = [random_clock(rng), random_clock(rng)]
            net = MulticlockService.multiclock_from_lsn(lsn, clocks)
            instants = {0.0, 30.0}
            for clock in clocks:
                ticks = clock.ticks_between(0.0, 30.0)
                instants.update(float(t) for t in np.atleast_1d(clock.tick_time(ticks)))
            instants = sorted(instants)
            for a, b in zip(instants, instants[1:]):
                if b - a <= 1e-6:
                    continue
                nu = MulticlockService.occupancy(net, 0, a)
                assert MulticlockService.occupancy(net, 0, (a + b) / 2) == nu
                assert MulticlockService.occupancy(net, 0, a + (b - a) / 4) == nu

    def test_frames_on_cycle_are_conserved(self, k3_a, rng):
        cycles = GraphService.directed_cycles(k3_a.graph)
        for _ in range(50):
            net = MulticlockService.multiclock_from_lsn(k3_a, [random_clock(rng) for _ in range(3)])
            t = float(rng.uniform(-5, 50))
            for cycle in cycles:
                expected = LsnService.directed_cycle_rtt(k3_a, cycle)
                assert MulticlockService.cycle_frame_count(net, cycle, t) == expected


class TestRealizability:
    def test_drift_underflows(self):
        verdict = MulticlockService.check_realizability(drift_pair(), (0.0, 50.0), 10)
        assert not verdict.ok
        assert verdict.first_violation.t == pytest.approx(45 / 1.1)
        assert verdict.first_violation.occupancy == -1
        assert verdict.nu_range[0] < 0

    def test_drift_ok_on_short_horizon(self):
        verdict = MulticlockService.check_realizability(drift_pair(), (0.0, 20.0), 4)
        assert verdict.ok
        assert verdict.bounded_horizon
        assert 0 <= verdict.nu_range[0] <= verdict.nu_range[1] <= 4
        assert verdict.samples > 0

    def test_overflow(self):
        net = drift_pair(omega_j=0.5, lam=2)
        verdict = MulticlockService.check_realizability(net, (0.0, 30.0), 6)
        assert not verdict.ok
        assert verdict.first_violation.occupancy == 7

    def test_synchronous(self, triangle):
        net = MulticlockService.synchronous_realization(triangle)
        verdict = MulticlockService.check_realizability(net, (0.0, 25.0), 4)
        assert verdict.ok
        assert verdict.nu_range == (2, 4)

    def test_zero_cycle_reported(self, two_cycle):
        net = MulticlockService.synchronous_realization(two_cycle(0, 0))
        verdict = MulticlockService.check_realizability(net, (0.0, 5.0), 1)
        assert len(verdict.zero_cycles) == 1

    def test_realizable_implies_nonnegative_cycles(self, rng):
        realizable = 0
        for _ in range(300):
            g = random_strongly_connected_graph(rng, int(rng.integers(2, 5)))
            lsn = Lsn(g, random_latencies(rng, g.m, -1, 4))
            clocks = [ClockModel.constant(float(rng.uniform(0.95, 1.05)), float(rng.uniform(0, 1))) for _ in g.nodes]
            net = MulticlockService.multiclock_from_lsn(lsn, clocks)
            if not MulticlockService.check_realizability(net, (0.0, 20.0), 8).ok:
                continue
            realizable += 1
            for cycle in GraphService.directed_cycles(g):
                assert LsnService.directed_cycle_rtt(lsn, cycle) >= 0
        assert realizable > 0

    def test_success_logged_at_info(self, triangle, caplog):
        net = MulticlockService.synchronous_realization(triangle)
        with caplog.at_level(logging.INFO, logger="lsnkit.services.multiclock_service"):
            assert MulticlockService.check_realizability(net, (0.0, 25.0), 4).ok
        assert any(r.levelno == logging.INFO for r in caplog.records)
        assert not any(r.levelno >= logging.WARNING for r in caplog.records)

    def test_zero_cycle_logged_as_warning(self, two_cycle, caplog):
        net = MulticlockService.synchronous_realization(two_cycle(0, 0))
        with caplog.at_level(logging.INFO, logger="lsnkit.services.multiclock_service"):
            MulticlockService.check_realizability(net, (0.0, 5.0), 1)
        assert any(r.levelno == logging.WARNING for r in caplog.records)

    def test_bad_arguments(self, triangle):
        net = MulticlockService.synchronous_realization(triangle)
        with pytest.raises(BadHorizon):
            MulticlockService.check_realizability(net, (3.0, 3.0), 4)
        with pytest.raises(PreconditionViolated):
            MulticlockService.check_realizability(net, (0.0, 3.0), 0)

    def test_negative_latency_needs_relabeling(self, two_cycle):
        with pytest.raises(NegativeLatency):
            MulticlockService.synchronous_realization(two_cycle(-1, 1))


class TestSampleTrace:
    def test_synchronous_trace(self, triangle):
        net = MulticlockService.synchronous_realization(triangle)
        records = MulticlockService.sample_trace(net, 0.0, 5.0)
        assert [r.t for r in records] == sorted(r.t for r in records)
        for record in records:
            lam = triangle.latencies[record.edge]
            if record.kind == POP:
                assert record.occupancy == lam
                assert record.frame == record.tick - lam
            elif record.kind == ARRIVE:
                assert record.occupancy == lam + 1
        assert sum(1 for r in records if r.kind == SEND) == 3 * 6

    def test_occupancy_matches_floor_formula(self):
        net = drift_pair(omega_j=1.25, lam=3)
        records = MulticlockService.sample_trace(net, 0.0, 12.0)
        for (t, edge), group in groupby(records, key=lambda r: (r.t, r.edge)):
            last = list(group)[-1]
            assert last.occupancy == MulticlockService.occupancy(net, edge, t)

    def test_bad_interval(self, triangle):
        net = MulticlockService.synchronous_realization(triangle)
        with pytest.raises(BadHorizon):
            MulticlockService.sample_trace(net, 2.0, 1.0)
