"""
逻辑同步网络服务测试：路径/环时延、正往返时间、扩展图窗口与 happens-before
"""

import itertools

import networkx as nx
import pytest

from lsnkit.errors import BadHorizon, NegativeCycle, NotACycle, NotAPath, PreconditionViolated
from lsnkit.models import CycleVector, ExtendedEvent, Lsn
from lsnkit.models.network import COMMUNICATION, COMPUTATIONAL
from lsnkit.services.graph_service import GraphService
from lsnkit.services.lsn_service import LsnService
from tests.helpers import random_connected_graph, random_latencies, random_strongly_connected_graph


class TestLatencies:
    def test_path_latency(self, triangle):
        assert LsnService.directed_path_latency(triangle, [1, 2, 3]) == 5
        assert LsnService.directed_path_latency(triangle, [2]) == 0

    def test_path_additive(self, k3_a):
        left = LsnService.directed_path_latency(k3_a, [1, 2])
        right = LsnService.directed_path_latency(k3_a, [2, 3])
        assert LsnService.directed_path_latency(k3_a, [1, 2, 3]) == left + right

    @pytest.mark.parametrize("path", [[3, 1], [1, 2, 1], []])
    def test_not_a_path(self, triangle, path):
        with pytest.raises(NotAPath):
            LsnService.directed_path_latency(triangle, path)

    def test_directed_cycle_rtt(self, k3_a, two_cycle):
        assert LsnService.directed_cycle_rtt(k3_a, [1, 2, 1]) == 5
        assert LsnService.directed_cycle_rtt(k3_a, [1, 2, 3, 1]) == 6
        assert LsnService.directed_cycle_rtt(two_cycle(3, -3), [1, 2, 1]) == 0

    def test_directed_cycle_rejects_backward_edge(self, triangle):
        with pytest.raises(NotACycle):
            LsnService.directed_cycle_rtt(triangle, [1, 2, 3, 1])

    def test_signed_cycle_rtt(self, triangle, triangle_shifted):
        assert LsnService.signed_cycle_rtt(triangle, [1, 2, 3, 1]) == 1
        assert LsnService.signed_cycle_rtt(triangle_shifted, [1, 2, 3, 1]) == 2
        assert LsnService.signed_cycle_rtt(triangle, CycleVector((-1, -1, 1))) == -1

    def test_signed_reduces_to_directed(self, k3_a):
        for cycle in GraphService.directed_cycles(k3_a.graph):
            assert LsnService.signed_cycle_rtt(k3_a, cycle) == LsnService.directed_cycle_rtt(k3_a, cycle)

    def test_signed_rejects_non_cycle_vector(self, triangle):
        with pytest.raises(NotACycle):
            LsnService.signed_cycle_rtt(triangle, CycleVector((1, 0, 0)))


class TestRoundTrips:
    def test_min_rtt(self, triangle, k3_a, two_cycle):
        assert LsnService.min_directed_cycle_rtt(triangle) is None
        assert LsnService.min_directed_cycle_rtt(k3_a) == 2
        assert LsnService.min_directed_cycle_rtt(two_cycle(1, 1)) == 2

    def test_positive_rtts(self, triangle, k3_a, two_cycle):
        assert LsnService.has_positive_rtts(k3_a)
        assert LsnService.has_positive_rtts(triangle)
        assert not LsnService.has_positive_rtts(two_cycle(1, -1))
        assert LsnService.nonpositive_cycle(two_cycle(1, -1)) in ([1, 2, 1], [2, 1, 2])
        assert LsnService.nonpositive_cycle(k3_a) is None

    def test_positive_rtts_matches_enumeration(self, rng):
        for _ in range(100):
            g = random_strongly_connected_graph(rng, int(rng.integers(2, 6)))
            lsn = Lsn(g, random_latencies(rng, g.m, -3, 3))
            expected = min(LsnService.directed_cycle_rtt(lsn, c) for c in GraphService.directed_cycles(g)) > 0
            assert LsnService.has_positive_rtts(lsn) == expected

    def test_shortest_latencies_reports_negative_cycle(self, two_cycle):
        lsn = two_cycle(1, -2)
        with pytest.raises(NegativeCycle) as excinfo:
            LsnService.shortest_latencies(lsn, 1)
        assert sorted(excinfo.value.cycle) == [0, 1]

    def test_min_rtt_with_negative_cycle(self, two_cycle):
        assert LsnService.min_directed_cycle_rtt(two_cycle(1, -2)) == -1

    def test_min_rtt_matches_enumeration(self, rng):
        for _ in range(100):
            g = random_strongly_connected_graph(rng, int(rng.integers(2, 6)))
            lsn = Lsn(g, random_latencies(rng, g.m, -3, 5))
            expected = min(LsnService.directed_cycle_rtt(lsn, c) for c in GraphService.directed_cycles(g))
            assert LsnService.min_directed_cycle_rtt(lsn) == expected

    def test_shortest_latencies(self, k3_a):
        dist, pred = LsnService.shortest_latencies(k3_a, 1)
        assert dist == {1: 0, 2: 3, 3: 1}
        assert 1 not in pred


class TestExtendedWindow:
    def test_single_node(self):
        lsn = Lsn.from_edges(["a"], [])
        w = LsnService.extended_window(lsn, 0, 2)
        assert len(w.events) == 3
        assert w.edges_of_kind(COMPUTATIONAL) == [
            (ExtendedEvent("a", 0), ExtendedEvent("a", 1)),
            (ExtendedEvent("a", 1), ExtendedEvent("a", 2)),
        ]
        assert w.edges_of_kind(COMMUNICATION) == []
        assert LsnService.is_window_acyclic(w)

    def test_zero_latency_edge(self):
        lsn = Lsn.from_edges([1, 2], [(1, 2, 0)])
        w = LsnService.extended_window(lsn, 0, 1)
        assert (ExtendedEvent(1, 0), ExtendedEvent(2, 0)) in w.edges_of_kind(COMMUNICATION)

    def test_edges_stay_inside(self, k3_b):
        w = LsnService.extended_window(k3_b, -2, 3)
        for src, dst, _kind in w.edges:
            assert w.contains(src) and w.contains(dst)
        expected = sum(max(0, 6 - abs(lam)) for lam in k3_b.latencies) + 3 * 5
        assert len(w.edges) == expected

    def test_zero_cycle_window_is_cyclic(self, two_cycle):
        w = LsnService.extended_window(two_cycle(0, 0), 0, 1)
        assert not LsnService.is_window_acyclic(w)

    def test_bad_window(self, triangle):
        with pytest.raises(BadHorizon):
            LsnService.extended_window(triangle, 3, 2)

    def test_positive_rtts_give_acyclic_windows(self, rng):
        checked = 0
        while checked < 30:
            g = random_strongly_connected_graph(rng, int(rng.integers(2, 5)))
            lsn = Lsn(g, random_latencies(rng, g.m, -3, 3))
            if not LsnService.has_positive_rtts(lsn):
                continue
            assert LsnService.is_window_acyclic(LsnService.extended_window(lsn, -6, 6))
            checked += 1


class TestHappensBefore:
    def test_same_node(self, k3_a):
        assert LsnService.happens_before(k3_a, ExtendedEvent(1, 0), ExtendedEvent(1, 1))
        assert not LsnService.happens_before(k3_a, ExtendedEvent(1, 0), ExtendedEvent(1, 0))

    def test_shortest_path_slack(self, k3_a):
        assert LsnService.happens_before(k3_a, ExtendedEvent(1, 0), ExtendedEvent(2, 3))
        assert not LsnService.happens_before(k3_a, ExtendedEvent(1, 0), ExtendedEvent(2, 2))

    def test_unreachable_is_false(self, triangle):
        assert not LsnService.happens_before(triangle, ExtendedEvent(3, 0), ExtendedEvent(1, 100))

    def test_requires_positive_rtts(self, two_cycle):
        with pytest.raises(PreconditionViolated):
            LsnService.happens_before(two_cycle(1, -1), ExtendedEvent(1, 0), ExtendedEvent(2, 5))

    def test_agrees_with_reachability(self, rng):
        instances = 0
        while instances < 12:
            n = int(rng.integers(2, 5))
            g = random_connected_graph(rng, n, density=0.25)
            lsn = Lsn(g, random_latencies(rng, g.m, -3, 3))
            if not LsnService.has_positive_rtts(lsn):
                continue
            instances += 1
            # 窗口两侧留足余量，保证所有最短路径都在窗口内
            margin = 3 * (n - 1) * 3 + 1
            lo, hi = -margin, 15 + margin
            graph = LsnService.extended_window(lsn, lo, hi).to_networkx()
            events = [ExtendedEvent(i, tau) for i in g.nodes for tau in range(0, 16)]
            for a in events:
                later = nx.descendants(graph, a)
                for b in events:
                    assert LsnService.happens_before(lsn, a, b) == (b in later)

    def test_partial_order_laws(self, k3_a):
        events = [ExtendedEvent(i, t) for i in (1, 2, 3) for t in range(-3, 4)]
        hb = {(a, b): LsnService.happens_before(k3_a, a, b) for a in events for b in events}
        for a in events:
            assert not hb[(a, a)]
        for a, b, c in itertools.product(events, repeat=3):
            if hb[(a, b)] and hb[(b, c)]:
                assert hb[(a, c)]

    def test_reachable_in_window(self, k3_a):
        w = LsnService.extended_window(k3_a, 0, 6)
        assert LsnService.reachable_in_window(w, ExtendedEvent(1, 0), ExtendedEvent(2, 3))
        assert not LsnService.reachable_in_window(w, ExtendedEvent(1, 0), ExtendedEvent(2, 2))
