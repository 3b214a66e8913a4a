"""Singleton decoding and SIC peeling on connectivity graphs."""
from __future__ import annotations

import numpy as np
import pytest
from conftest import random_deployment, sequential_peel

from beamaloha import (
    ConnectivityGraph,
    decode_cooperative_sic,
    decode_noncooperative,
    residual_graph,
)
from beamaloha.graph import build_graph_indexed


def make_graph(n_ue, n_bs, edges):
    ue = np.array([e[0] for e in edges], dtype=np.int64)
    bs = np.array([e[1] for e in edges], dtype=np.int64)
    return ConnectivityGraph.from_edges(n_ue, n_bs, ue, bs)


class TestNonCooperative:
    def test_singleton(self):
        g = make_graph(1, 1, [(0, 0)])
        res = decode_noncooperative(g)
        assert res.collected == {0}
        assert res.iterations == 1
        assert res.per_iteration_collected == [1]
        assert res.residual_edges == 0

    def test_collision(self):
        g = make_graph(2, 1, [(0, 0), (1, 0)])
        res = decode_noncooperative(g)
        assert res.collected == frozenset()
        assert res.residual_edges == 2

    def test_mixed_degrees(self):
        # station 0 hears only user 0; station 1 hears users 0 and 1
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 1)])
        res = decode_noncooperative(g)
        assert res.collected == {0}
        assert res.per_iteration_collected == [1]
        assert res.residual_edges == 1

    def test_user_counted_once_with_two_singleton_stations(self):
        g = make_graph(1, 2, [(0, 0), (0, 1)])
        res = decode_noncooperative(g)
        assert res.collected == {0}
        assert res.per_iteration_collected == [1]

    def test_collected_bounded_by_singleton_stations(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            g = build_graph_indexed(random_deployment(rng))
            res = decode_noncooperative(g)
            assert len(res.collected) <= int((g.bs_degrees() == 1).sum())


class TestCooperativeSic:
    def test_chain_peels_in_two_rounds(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 1)])
        res = decode_cooperative_sic(g)
        assert res.collected == {0, 1}
        assert res.iterations == 2
        assert res.per_iteration_collected == [1, 1]
        assert res.residual_edges == 0

    def test_complete_2x2_is_stopping_set(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
        res = decode_cooperative_sic(g)
        assert res.collected == frozenset()
        assert res.iterations == 0
        assert res.per_iteration_collected == []
        assert res.residual_edges == 4

    def test_empty_graph(self):
        g = make_graph(0, 0, [])
        res = decode_cooperative_sic(g)
        assert res.collected == frozenset()
        assert res.residual_edges == 0

    def test_first_round_equals_noncooperative(self):
        rng = np.random.default_rng(37)
        for _ in range(100):
            g = build_graph_indexed(random_deployment(rng))
            nc = decode_noncooperative(g)
            coop = decode_cooperative_sic(g)
            if coop.per_iteration_collected:
                assert coop.per_iteration_collected[0] == len(nc.collected)
            else:
                assert len(nc.collected) == 0

    def test_monotone_over_noncooperative(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            g = build_graph_indexed(random_deployment(rng))
            assert decode_noncooperative(g).collected <= decode_cooperative_sic(g).collected

    def test_termination_and_counts(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            g = build_graph_indexed(random_deployment(rng))
            res = decode_cooperative_sic(g)
            assert res.iterations <= g.n_ue
            assert sum(res.per_iteration_collected) == len(res.collected)
            assert all(c > 0 for c in res.per_iteration_collected)

    def test_confluence_with_sequential_peeling(self):
        rng = np.random.default_rng(47)
        for k in range(60):
            dep = random_deployment(rng, lam_lo=50, lam_hi=120, r_lo=0.05, r_hi=0.25)
            g = build_graph_indexed(dep)
            expected = decode_cooperative_sic(g).collected
            for shuffle in range(3):
                assert sequential_peel(g, np.random.default_rng(1000 * k + shuffle)) == expected

    def test_max_iterations_one_matches_noncooperative(self):
        rng = np.random.default_rng(53)
        for _ in range(30):
            g = build_graph_indexed(random_deployment(rng))
            capped = decode_cooperative_sic(g, max_iterations=1)
            assert capped.collected == decode_noncooperative(g).collected
            assert capped.iterations <= 1

    def test_max_iterations_validated(self):
        g = make_graph(1, 1, [(0, 0)])
        with pytest.raises(ValueError):
            decode_cooperative_sic(g, max_iterations=0)

    def test_input_graph_unchanged(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 1)])
        before = (g.ue_adj.copy(), g.bs_adj.copy())
        decode_cooperative_sic(g)
        decode_noncooperative(g)
        assert np.array_equal(g.ue_adj, before[0])
        assert np.array_equal(g.bs_adj, before[1])


class TestResidualGraph:
    def test_fully_decoded_residual_empty(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 1)])
        res = decode_cooperative_sic(g)
        assert residual_graph(g, res).n_edges == 0

    def test_stopping_set_residual_equals_input(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
        res = decode_cooperative_sic(g)
        assert residual_graph(g, res) == g

    def test_no_degree_one_station_after_natural_termination(self):
        rng = np.random.default_rng(59)
        for _ in range(60):
            dep = random_deployment(rng, lam_lo=100, lam_hi=250)
            g = build_graph_indexed(dep)
            residual = residual_graph(g, decode_cooperative_sic(g))
            deg = residual.bs_degrees()
            assert not np.any(deg == 1)

    def test_noncooperative_residual_counts(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 1)])
        res = decode_noncooperative(g)
        residual = residual_graph(g, res)
        assert residual.n_edges == res.residual_edges == 1

    def test_rejects_mismatched_pair(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 1)])
        res = decode_noncooperative(g)  # collected {0}, residual 1
        other = make_graph(2, 2, [(0, 0), (1, 0), (1, 1)])
        with pytest.raises(ValueError):
            residual_graph(other, res)

    def test_rejects_out_of_range_collected(self):
        g = make_graph(2, 2, [(0, 0), (0, 1), (1, 1)])
        res = decode_noncooperative(make_graph(5, 5, [(4, 4)]))
        with pytest.raises(ValueError):
            residual_graph(g, res)
