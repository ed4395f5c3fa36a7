from __future__ import annotations

import numpy as np
import pytest

from netimmune.graph import build_graph
from netimmune.immunize import (ScoreQueue, greedy_select, init_scores, netshield,
                                plan_from_json, plan_to_json, random_solver,
                                sparseshield)
from netimmune.parsers import RawEdge
from netimmune.spectral import largest_eigenpair

from .conftest import er_graph, graph_from_pairs
from .oracles import rescoring_greedy


class TestScoreQueue:
    def test_pop_order_and_ties(self):
        q = ScoreQueue(np.array([1.0, 3.0, 3.0, 2.0]))
        selected = np.zeros(4, dtype=bool)
        node, score = q.pop_best(selected)
        assert (node, score) == (1, 3.0)  # tie with 2 broken by index

    def test_stale_entries_skipped(self):
        q = ScoreQueue(np.array([5.0, 1.0]))
        q.update(0, 0.5)
        selected = np.zeros(2, dtype=bool)
        assert q.pop_best(selected) == (1, 1.0)
        assert q.pop_best(selected) == (0, 0.5)


class TestInitScores:
    def test_star_center_maximal(self, star4):
        g, _ = star4
        eig = largest_eigenpair(g)
        scores = init_scores(g, eig, set())
        # analytic Perron vector of the star: u_center^2 = 1/2
        assert scores[0] == pytest.approx(2.0, abs=1e-6)
        assert np.all(scores[0] > scores[1:])

    def test_harmful_center_halved_leaves_unchanged(self, star4):
        g, _ = star4
        eig = largest_eigenpair(g)
        clean = init_scores(g, eig, set())
        penalized = init_scores(g, eig, {0})
        assert penalized[0] == clean[0] * 0.5
        assert np.array_equal(penalized[1:], clean[1:])

    def test_single_node_zero(self):
        g, _ = build_graph([RawEdge("a", "a")])
        eig = largest_eigenpair(g)
        assert init_scores(g, eig, set()).tolist() == [0.0]

    def test_out_of_range_harmful(self, star4):
        g, _ = star4
        eig = largest_eigenpair(g)
        with pytest.raises(ValueError):
            init_scores(g, eig, {99})


class TestGreedy:
    def test_k_zero(self, star4):
        g, _ = star4
        plan = sparseshield(g, 0)
        assert plan.blocked == []

    def test_star_picks_center_first(self, star4):
        g, _ = star4
        eig = largest_eigenpair(g)
        plan = greedy_select(g, eig, 1)
        assert plan.blocked == [0]

    def test_star_k2_tie_break(self, star4):
        g, _ = star4
        plan = netshield(g, 2)
        assert plan.blocked == [0, 1]

    def test_k_exceeding_n_returns_all(self, k4):
        g, _ = k4
        plan = sparseshield(g, 10)
        assert sorted(plan.blocked) == [0, 1, 2, 3]
        assert plan.k == 10

    def test_selection_scores_are_pop_time_scores(self, star4):
        g, _ = star4
        plan = sparseshield(g, 2)
        assert plan.selection_scores[0] == pytest.approx(2.0, abs=1e-6)
        # after removing the center every leaf score drops to ~0
        assert plan.selection_scores[1] == pytest.approx(0.0, abs=1e-6)

    def test_no_duplicates(self):
        g, _ = er_graph(50, 0.1, seed=1)
        plan = sparseshield(g, 20)
        assert len(plan.blocked) == len(set(plan.blocked)) == 20

    def test_negative_scores_still_fill_budget(self, path3):
        g, _ = path3
        plan = sparseshield(g, 3)
        assert len(plan.blocked) == 3


class TestOracleEquivalence:
    def test_matches_rescoring_oracle_small(self):
        fixture = 0
        for seed in range(40):
            n = 4 + seed % 5  # 4..8 nodes
            g, _ = er_graph(n, 0.5, seed=seed)
            eig = largest_eigenpair(g)
            rng = np.random.Generator(np.random.PCG64(seed))
            harmful = {int(i) for i in rng.choice(g.n, size=g.n // 3, replace=False)}
            for k in range(1, 5):
                expected = rescoring_greedy(g.dense(), eig.value, eig.vector, k, harmful)
                assert greedy_select(g, eig, k, harmful).blocked == expected
                fixture += 1
        assert fixture >= 150

    def test_netshield_equals_sparseshield(self):
        for seed in range(10):
            g, _ = er_graph(30 + 20 * seed, 0.08, seed=seed)
            harmful = set(range(0, g.n, 7))
            k = max(1, g.n // 10)
            assert netshield(g, k, harmful).blocked == \
                sparseshield(g, k, harmful).blocked


class TestPenalty:
    def test_automorphic_pair_clean_first(self):
        # complete graphs: every pair is automorphic with equal scores
        for n in range(3, 9):
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            g, _ = graph_from_pairs(pairs)
            h = n - 1
            plan = sparseshield(g, n, harmful={h})
            assert plan.blocked.index(0) < plan.blocked.index(h)

    def test_mirror_pair_clean_first(self):
        # two mirrored ER copies joined by a matching: swap is an automorphism
        base, _ = er_graph(6, 0.5, seed=3)
        pairs = [(i, j) for i, j, _ in base.edges()]
        mirrored = pairs + [(i + 6, j + 6) for i, j in pairs] + [(i, i + 6) for i in range(6)]
        g, _ = graph_from_pairs(mirrored)
        h, v = 2, 8  # 8 is the mirror image of 2
        plan = sparseshield(g, 12, harmful={h})
        assert plan.blocked.index(v) < plan.blocked.index(h)


class TestEigenvalueDrop:
    def test_blocking_reduces_lambda(self):
        for seed in range(5):
            g, node_map = er_graph(40, 0.15, seed=seed)
            before = largest_eigenpair(g).value
            plan = sparseshield(g, 4)
            keep = np.array(sorted(set(range(g.n)) - set(plan.blocked)), dtype=np.int64)
            from netimmune.graph import induce_subgraph
            sub, _ = induce_subgraph(g, node_map, keep)
            if sub.m == 0:
                continue
            after = largest_eigenpair(sub).value
            assert after < before


class TestRandomSolver:
    def test_k_equals_n(self, k4):
        g, _ = k4
        plan = random_solver(g, 4, seed=3)
        assert sorted(plan.blocked) == [0, 1, 2, 3]

    def test_deterministic(self, k4):
        g, _ = k4
        assert random_solver(g, 2, seed=9).blocked == random_solver(g, 2, seed=9).blocked

    def test_uniform_frequencies(self):
        g, _ = er_graph(10, 0.3, seed=0)
        counts = np.zeros(10)
        for s in range(10_000):
            counts[random_solver(g, 1, seed=s).blocked[0]] += 1
        freqs = counts / 10_000
        assert np.all(np.abs(freqs - 0.1) <= 0.01)

    def test_records_seed(self, k4):
        g, _ = k4
        assert random_solver(g, 1, seed=42).seed == 42


class TestPlanJson:
    def test_round_trip(self, star4):
        g, node_map = star4
        plan = sparseshield(g, 2, harmful={1})
        doc = plan_to_json(plan, node_map)
        assert doc["blocked"][0] == node_map.external(0)
        assert "seed" not in doc
        again = plan_from_json(doc, node_map)
        assert again.blocked == plan.blocked

    def test_random_plan_keeps_seed(self, star4):
        g, node_map = star4
        doc = plan_to_json(random_solver(g, 1, seed=5), node_map)
        assert doc["seed"] == 5


class TestDenseLimit:
    def test_netshield_refuses_large_graphs(self):
        g, _ = er_graph(50, 0.1, seed=0)
        with pytest.raises(ValueError, match="sparseshield"):
            netshield(g, 2, dense_limit=10)
