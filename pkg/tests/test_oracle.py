import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from graphexplore.core import Graph, minimum_spanning_tree, shortest_path_distances
from graphexplore.errors import GraphStructureError, ResourceGuardError
from graphexplore.oracle import (
    brute_force_exploration,
    brute_force_optspan,
    brute_force_optspan_edges,
    enumerate_cycles_check,
    exact_tsp,
    mst_bounds,
)
from graphexplore.spanner import verify_spanner_minimality

from conftest import random_connected_graph


def tour_cost_replay(g: Graph, order) -> Fraction:
    """Re-price a visiting order through single-source distance queries."""
    total = Fraction(0)
    for a, b in zip(order, order[1:]):
        total += shortest_path_distances(g, a).dist[b]
    return total


def unit_square() -> Graph:
    return Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])


class TestExactTsp:
    def test_single_vertex(self):
        g = Graph(1, [])
        assert exact_tsp(g) == exact_tsp(g, 0)
        assert exact_tsp(g).cost == 0 and exact_tsp(g).order == (0,)

    def test_single_edge(self):
        g = Graph(2, [(0, 1, Fraction(7, 3))])
        t = exact_tsp(g)
        assert t.cost == Fraction(14, 3)
        assert t.order == (0, 1, 0)

    def test_unit_triangle(self):
        t = exact_tsp(Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))
        assert t.cost == 3

    def test_path_doubles_back(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1)])
        t = exact_tsp(g)
        assert t.cost == 4
        assert len(t.order) == 4 and t.order[0] == t.order[-1] == 0

    def test_start_respected(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        t = exact_tsp(g, start=2)
        assert t.order[0] == t.order[-1] == 2
        assert sorted(t.order[:-1]) == [0, 1, 2]

    def test_tree_costs_twice_its_weight(self, rng):
        for _ in range(10):
            g = random_connected_graph(rng, rng.randint(2, 9), 0)
            assert exact_tsp(g).cost == 2 * g.total_weight()

    def test_metric_closure_shortcut_used(self):
        # heavy direct edge is bypassed through the two cheap ones
        g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 10)])
        assert exact_tsp(g).cost == 4

    def test_size_guard(self):
        g = Graph(16, [(i, i + 1, 1) for i in range(15)])
        with pytest.raises(ResourceGuardError):
            exact_tsp(g)

    def test_start_out_of_range(self):
        g = Graph(2, [(0, 1, 1)])
        with pytest.raises(ValueError):
            exact_tsp(g, start=2)

    def test_disconnected_rejected(self):
        g = Graph(3, [(0, 1, 1)])
        with pytest.raises(GraphStructureError):
            exact_tsp(g)

    def test_order_prices_to_reported_cost(self, rng):
        for _ in range(8):
            g = random_connected_graph(rng, rng.randint(2, 8), rng.randint(0, 5))
            t = exact_tsp(g)
            assert tour_cost_replay(g, t.order) == t.cost


class TestPermutationCrossCheck:
    def test_agreement_with_held_karp(self, rng):
        for _ in range(30):
            n = rng.randint(2, 8)
            g = random_connected_graph(rng, n, rng.randint(0, 6))
            start = rng.randrange(n)
            assert brute_force_exploration(g, start).cost == exact_tsp(g, start).cost

    def test_guard_at_nine(self):
        g = Graph(9, [(i, i + 1, 1) for i in range(8)])
        with pytest.raises(ResourceGuardError):
            brute_force_exploration(g)

    def test_sandwich(self, rng):
        for _ in range(10):
            g = random_connected_graph(rng, rng.randint(2, 10), rng.randint(0, 8))
            lo, hi = mst_bounds(g)
            cost = exact_tsp(g).cost
            assert lo <= cost <= hi
            assert hi == 2 * lo == 2 * minimum_spanning_tree(g).weight()


class TestOptspan:
    def test_tree_is_its_own_optimum(self):
        g = Graph(4, [(0, 1, 2), (1, 2, 1), (1, 3, 5)])
        assert brute_force_optspan(g, Fraction(1, 2)) == 1
        assert brute_force_optspan_edges(g, Fraction(1, 2)).ids == {0, 1, 2}

    def test_square_drops_exactly_one_edge(self):
        g = unit_square()
        best = brute_force_optspan_edges(g, 2)
        assert len(best.ids) == 3 and best.weight() == 3
        assert brute_force_optspan(g, 2) == 1
        assert brute_force_optspan(g, 1) == Fraction(4, 3)

    def test_forced_edge_respected(self):
        g = unit_square()
        free = brute_force_optspan_edges(g, 2)
        assert 0 not in free.ids
        forced = brute_force_optspan_edges(g, 2, forced_edges=(0,))
        assert 0 in forced.ids and forced.weight() == 3

    def test_forced_edge_range_checked(self):
        with pytest.raises(ValueError):
            brute_force_optspan_edges(unit_square(), 1, forced_edges=(9,))

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            brute_force_optspan(unit_square(), 0)

    def test_size_guard(self):
        g = Graph(2, [(0, 1, 1)] * 21)
        with pytest.raises(ResourceGuardError):
            brute_force_optspan(g, 1)

    def test_optimum_at_most_any_feasible_weight(self, rng):
        # sanity against a hand-rolled feasible candidate: the whole graph
        for _ in range(6):
            g = random_connected_graph(rng, rng.randint(3, 7), rng.randint(0, 4))
            opt = brute_force_optspan(g, Fraction(1, 2))
            whole = g.total_weight() / minimum_spanning_tree(g).weight()
            assert 1 <= opt <= whole


class TestCycleEnumeration:
    def test_tree_has_no_cycles(self):
        g = Graph(4, [(0, 1, 1), (1, 2, 1), (1, 3, 1)])
        rep = enumerate_cycles_check(g, 5)
        assert rep.ok and rep.cycles_checked == 0

    def test_square_pass_and_fail(self):
        g = unit_square()
        assert enumerate_cycles_check(g, 2).ok  # detour 3 > 2
        rep = enumerate_cycles_check(g, 3)  # detour 3 <= 3
        assert not rep.ok
        (v,) = rep.violations
        assert v["heaviest"] == 3 and v["detour"] == "3" and v["allowed"] == "3"

    def test_theta_counts_all_three_cycles(self):
        edges = [(0, 1, 1), (0, 2, 1), (2, 1, 1), (0, 3, 1), (3, 1, 1)]
        g = Graph(4, edges)
        rep = enumerate_cycles_check(g, Fraction(3, 2))
        assert rep.ok and rep.cycles_checked == 3
        assert not enumerate_cycles_check(g, 2).ok

    def test_disjoint_union_not_a_simple_cycle(self):
        # two triangles joined by a bridge: the XOR of both is disconnected
        edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1),
                 (3, 4, 1), (4, 5, 1), (5, 3, 1)]
        g = Graph(6, edges)
        rep = enumerate_cycles_check(g, Fraction(3, 2))
        assert rep.cycles_checked == 2

    def test_watch_list_filters_by_heaviest(self):
        g = unit_square()
        rep = enumerate_cycles_check(g, 3, edge_ids={0})
        assert rep.ok and rep.cycles_checked == 0
        rep = enumerate_cycles_check(g, 3, edge_ids={3})
        assert not rep.ok and rep.cycles_checked == 1

    def test_bound_validation(self):
        with pytest.raises(ValueError):
            enumerate_cycles_check(unit_square(), Fraction(1, 2))

    def test_cyclomatic_guard(self):
        g = Graph(2, [(0, 1, 1)] * 14)
        with pytest.raises(ResourceGuardError):
            enumerate_cycles_check(g, 2)

    def test_matches_per_edge_minimality(self, rng):
        # removing any single edge within its detour allowance <=> some simple
        # cycle's heaviest edge is within its allowance
        agree_false = 0
        for _ in range(40):
            g = random_connected_graph(rng, rng.randint(3, 10), rng.randint(0, 6))
            eps = rng.choice([Fraction(1, 4), Fraction(1), Fraction(4)])
            a = verify_spanner_minimality(g, eps).ok
            b = enumerate_cycles_check(g, 1 + eps).ok
            assert a == b
            if not a:
                agree_false += 1
        assert agree_false >= 5  # the equivalence must be exercised both ways


@settings(max_examples=30)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_tsp_oracles_agree_property(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, rng.randint(2, 7), rng.randint(0, 5))
    t = exact_tsp(g)
    assert t.cost == brute_force_exploration(g).cost
    lo, hi = mst_bounds(g)
    assert lo <= t.cost <= hi
