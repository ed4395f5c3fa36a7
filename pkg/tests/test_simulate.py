from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netimmune.immunize import ImmunizationPlan, random_solver, sparseshield
from netimmune.seeding import derive_seed, edge_coin, edge_coin_array
from netimmune.simulate import (MitigationReport, SpreadConfig, compare_with_plan,
                                simulate_spread)

from .conftest import er_graph, graph_from_pairs
from .oracles import exact_expected_activation


class TestCoins:
    def test_scalar_vector_agreement(self):
        rng = np.random.Generator(np.random.PCG64(0))
        i = rng.integers(0, 1000, size=200)
        j = rng.integers(0, 1000, size=200)
        coins = edge_coin_array(12345, i, j)
        for t in range(200):
            assert coins[t] == edge_coin(12345, int(i[t]), int(j[t]))

    def test_undirected_symmetry(self):
        assert edge_coin(7, 3, 9) == edge_coin(7, 9, 3)

    def test_range(self):
        rng = np.random.Generator(np.random.PCG64(1))
        coins = edge_coin_array(9, rng.integers(0, 50, 500), rng.integers(0, 50, 500))
        assert np.all((coins >= 0.0) & (coins < 1.0))

    def test_trial_streams_differ(self):
        a = derive_seed(5, 0)
        b = derive_seed(5, 1)
        assert a != b
        assert edge_coin(a, 0, 1) != edge_coin(b, 0, 1)


class TestSpreadBasics:
    def test_p_zero(self, path3):
        g, _ = path3
        out = simulate_spread(g, [0], [], SpreadConfig(p=0.0, trials=10, master_seed=1))
        assert out.mean_activated == 1.0
        assert out.active_series == [1.0]

    def test_p_one_floods_reachable(self):
        # component {0,1,2} reachable; 4-5 in another component
        g, _ = graph_from_pairs([(0, 1), (1, 2), (4, 5)])
        out = simulate_spread(g, [0], [], SpreadConfig(p=1.0, trials=3, master_seed=1))
        assert out.mean_activated == 3.0

    def test_p_one_avoids_blocked_paths(self):
        g, _ = graph_from_pairs([(0, 1), (1, 2)])
        out = simulate_spread(g, [0], [1], SpreadConfig(p=1.0, trials=2, master_seed=1))
        assert out.mean_activated == 1.0  # node 2 only reachable through blocked 1

    def test_blocked_seed_removed(self, path3):
        g, _ = path3
        out = simulate_spread(g, [0, 2], [0], SpreadConfig(p=0.0, trials=2, master_seed=1))
        assert out.active_series[0] == 1.0

    def test_series_non_decreasing_and_anchored(self):
        g, _ = er_graph(30, 0.1, seed=2)
        out = simulate_spread(g, [0, 1, 2], [], SpreadConfig(p=0.3, trials=50, master_seed=3))
        series = out.active_series
        assert series[0] == 3.0
        assert all(b >= a for a, b in zip(series, series[1:]))
        assert series[-1] == pytest.approx(out.mean_activated)

    def test_deterministic_per_master_seed(self):
        g, _ = er_graph(20, 0.15, seed=4)
        cfg = SpreadConfig(p=0.4, trials=1, master_seed=99)
        a = simulate_spread(g, [0], [], cfg, collect_sets=True)
        b = simulate_spread(g, [0], [], cfg, collect_sets=True)
        assert a.trial_sets == b.trial_sets
        assert a.per_trial_activated == b.per_trial_activated

    def test_blocked_nodes_never_active(self):
        g, _ = er_graph(25, 0.2, seed=5)
        blocked = {3, 7, 11}
        out = simulate_spread(g, [0, 1], blocked,
                              SpreadConfig(p=0.6, trials=40, master_seed=6),
                              collect_sets=True)
        for active in out.trial_sets:
            assert not (active & blocked)

    def test_seed_index_validation(self, path3):
        g, _ = path3
        with pytest.raises(ValueError):
            simulate_spread(g, [5], [], SpreadConfig(p=0.5, trials=1, master_seed=0))

    def test_max_steps_caps_spread(self):
        g, _ = graph_from_pairs([(i, i + 1) for i in range(10)])
        out = simulate_spread(g, [0], [],
                              SpreadConfig(p=1.0, trials=1, master_seed=0, max_steps=3))
        assert out.mean_activated == 4.0  # seed + 3 steps down the path


class TestExactExpectation:
    def test_path_expectation(self, path3):
        g, _ = path3
        cfg = SpreadConfig(p=0.5, trials=10_000, master_seed=11)
        out = simulate_spread(g, [0], [], cfg)
        se = np.std(out.per_trial_activated) / np.sqrt(cfg.trials)
        assert abs(out.mean_activated - 1.75) <= 3 * se

    def test_matches_enumeration_with_blocking(self):
        pairs = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (1, 4)]
        g, _ = graph_from_pairs(pairs)
        exact = exact_expected_activation(g.n, pairs, {0}, {2}, 0.3)
        cfg = SpreadConfig(p=0.3, trials=10_000, master_seed=13)
        out = simulate_spread(g, [0], [2], cfg)
        se = np.std(out.per_trial_activated) / np.sqrt(cfg.trials)
        assert abs(out.mean_activated - exact) <= 3 * max(se, 1e-12)


class TestCoupling:
    def test_blocked_subset_every_trial(self):
        g, _ = er_graph(40, 0.12, seed=7)
        plan = sparseshield(g, 6)
        cfg = SpreadConfig(p=0.25, trials=300, master_seed=21)
        report = compare_with_plan(g, [0, 1, 2], plan, cfg, collect_sets=True)
        for unblocked, blocked in zip(report.unblocked.trial_sets,
                                      report.blocked.trial_sets):
            assert blocked <= unblocked
        assert report.saved >= 0.0
        per_saved = np.array(report.unblocked.per_trial_activated) - \
            np.array(report.blocked.per_trial_activated)
        assert np.all(per_saved >= 0)

    def test_empty_plan_saves_exactly_zero(self):
        g, _ = er_graph(15, 0.2, seed=8)
        plan = ImmunizationPlan(algorithm="sparseshield", k=0, blocked=[],
                                selection_scores=[])
        report = compare_with_plan(g, [0], plan,
                                   SpreadConfig(p=0.5, trials=200, master_seed=1))
        assert report.saved == 0.0
        assert report.unblocked.per_trial_activated == report.blocked.per_trial_activated

    def test_star_block_all_leaves(self, star4):
        g, _ = star4
        plan = ImmunizationPlan(algorithm="sparseshield", k=4, blocked=[1, 2, 3, 4],
                                selection_scores=[0.0] * 4)
        report = compare_with_plan(g, [0], plan,
                                   SpreadConfig(p=1.0, trials=5, master_seed=2))
        assert report.saved == 4.0


@given(st.integers(min_value=0, max_value=2**63 - 1))
@settings(max_examples=50)
def test_derive_seed_stays_in_64_bits(seed):
    assert 0 <= derive_seed(seed, 17) < 2**64


class TestShieldBeatsRandom:
    def test_ordering_on_hub_graph(self):
        # hub-heavy graph: shield blocking outperforms random blocking
        import networkx as nx
        ba = nx.barabasi_albert_graph(120, 2, seed=10)
        g, _ = graph_from_pairs(list(ba.edges()))
        degrees = g.degrees
        seeds = list(np.argsort(-degrees)[:5])
        cfg = SpreadConfig(p=0.15, trials=200, master_seed=17)
        shield_plan = sparseshield(g, 12, harmful=set(int(s) for s in seeds))
        random_plan = random_solver(g, 12, seed=3)
        shield = compare_with_plan(g, seeds, shield_plan, cfg)
        rand = compare_with_plan(g, seeds, random_plan, cfg)
        assert shield.saved > rand.saved
