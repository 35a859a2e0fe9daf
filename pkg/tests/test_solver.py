"""Exact solver: values, policies, restart variant, brute-force oracle."""
from __future__ import annotations

import random

import pytest

from conftest import graph_of
from ncgames.errors import CapacityError, ValidationError
from ncgames.graph import (
    SUT,
    TESTER,
    GameGraph,
    NodeInfo,
    coverage_gain,
    generate_random,
    reachable,
)
from ncgames.play import best_response_gain
from ncgames.reductions import parse_dimacs, sat_to_ncgame
from ncgames.solver import (
    extract_optimal_sut,
    oracle_mcg,
    solve_mcg,
    solve_mcg_restart,
)


class TestSolveValue:
    def test_mirror_value(self, mirror):
        res = solve_mcg(mirror, "v0")
        assert res.value == 3
        assert res.states_explored > 0

    def test_mirror_from_other_roots(self, mirror):
        assert solve_mcg(mirror, "v1").value == 2
        assert solve_mcg(mirror, "v2").value == 2
        assert solve_mcg(mirror, "v3").value == 2

    def test_single_self_loop(self):
        g = graph_of({"a": (TESTER, 1, ("a",))}, init="a")
        assert solve_mcg(g, "a").value == 1

    def test_satisfiable_formula_game(self):
        f = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 -2 0\n")
        g, threshold = sat_to_ncgame(f)
        value = solve_mcg(g, g.init).value
        assert value == threshold == 9
        assert oracle_mcg(g, g.init) == 9

    def test_value_bounds(self):
        rng = random.Random(3)
        for i in range(40):
            n = rng.randint(1, 6)
            g = generate_random(n, 0.5, 1, min(3, n), seed=400 + i)
            value = solve_mcg(g, g.init).value
            assert coverage_gain(g, {g.init}) <= value
            assert value <= coverage_gain(g, reachable(g, g.init))

    def test_sink_rejected(self):
        g = graph_of({"a": (TESTER, 1, ("b",)), "b": (TESTER, 1, ())}, init="a")
        with pytest.raises(ValidationError, match="sink"):
            solve_mcg(g, "a")

    def test_cap(self, mirror):
        with pytest.raises(CapacityError):
            solve_mcg(mirror, "v0", cap=3)

    def test_state_packing_ceiling_is_enforced(self):
        # a cap above the packing width must not silently corrupt states
        n = 70
        nodes = {f"n{i:02d}": NodeInfo(TESTER, 1) for i in range(n)}
        edges = {f"n{i:02d}": (f"n{(i + 1) % n:02d}",) for i in range(n)}
        ring = GameGraph(nodes, edges, "n00")
        with pytest.raises(CapacityError):
            solve_mcg(ring, "n00", cap=100)

    def test_zero_gains_allowed(self):
        g = graph_of(
            {"a": (TESTER, 0, ("b",)), "b": (SUT, 2, ("a", "b"))},
            init="a",
        )
        assert solve_mcg(g, "a").value == 2


class TestOracle:
    def test_mirror(self, mirror):
        assert oracle_mcg(mirror, "v0") == 3

    def test_two_node_cycle(self):
        g = graph_of(
            {"a": (TESTER, 1, ("b",)), "b": (SUT, 1, ("a",))},
            init="a",
        )
        assert oracle_mcg(g, "a") == 2

    def test_agrees_with_solver_on_small_graphs(self):
        rng = random.Random(9)
        for i in range(80):
            n = rng.randint(1, 5)
            g = generate_random(n, 0.5, 1, min(3, n), seed=500 + i)
            assert oracle_mcg(g, g.init) == solve_mcg(g, g.init).value

    def test_cap(self, mirror):
        with pytest.raises(CapacityError):
            oracle_mcg(mirror, "v0", cap=2)


class TestRestart:
    def test_single_self_loop(self):
        g = graph_of({"a": (TESTER, 1, ("a",))}, init="a")
        assert solve_mcg_restart(g, "a") == 1

    def test_mirror_restart_reaches_everything(self, mirror):
        assert solve_mcg_restart(mirror, "v0") == 4

    def test_sink_allowed(self):
        g = graph_of(
            {"a": (TESTER, 1, ("b", "s")), "b": (TESTER, 1, ("a",)), "s": (SUT, 1, ())},
            init="a",
        )
        assert solve_mcg_restart(g, "a") == 3

    def test_dominates_plain_value_on_strict_graphs(self):
        rng = random.Random(11)
        for i in range(40):
            n = rng.randint(1, 6)
            g = generate_random(n, 0.5, 1, min(3, n), seed=600 + i)
            assert solve_mcg_restart(g, g.init) >= solve_mcg(g, g.init).value


class TestInvariants:
    def test_gain_scaling(self):
        rng = random.Random(13)
        for i in range(30):
            n = rng.randint(1, 5)
            g = generate_random(n, 0.5, 1, min(3, n), seed=700 + i)
            k = rng.randint(2, 7)
            scaled = g.map_gains(lambda _v, gain: k * gain)
            assert solve_mcg(scaled, scaled.init).value == k * solve_mcg(g, g.init).value

    def test_edge_monotonicity(self):
        rng = random.Random(15)
        tested = 0
        for i in range(60):
            n = rng.randint(2, 5)
            g = generate_random(n, 0.5, 1, 2, seed=800 + i)
            base = solve_mcg(g, g.init).value
            ids = g.node_ids()
            v = rng.choice(ids)
            missing = [w for w in ids if w not in g.edges[v]]
            if not missing:
                continue
            w = rng.choice(missing)
            edges = dict(g.edges)
            edges[v] = edges[v] + (w,)
            bigger = GameGraph(dict(g.nodes), edges, g.init)
            grown = solve_mcg(bigger, bigger.init).value
            if g.owner(v) == TESTER:
                assert grown >= base
            else:
                assert grown <= base
            tested += 1
        assert tested > 30


class TestPolicies:
    def test_mirror_policies_realize_the_value(self, mirror):
        res = solve_mcg(mirror, "v0")
        covered = self._simulate_policies(mirror, res)
        assert coverage_gain(mirror, covered) == res.value

    def test_policy_realizability_random(self):
        rng = random.Random(21)
        for i in range(60):
            n = rng.randint(1, 6)
            g = generate_random(n, 0.5, 1, min(3, n), seed=900 + i)
            res = solve_mcg(g, g.init)
            covered = self._simulate_policies(g, res)
            assert coverage_gain(g, covered) == res.value

    @staticmethod
    def _simulate_policies(g, res) -> set[str]:
        covered = {g.init}
        v = g.init
        seen = set()
        while (v, frozenset(covered)) not in seen:
            seen.add((v, frozenset(covered)))
            if g.owner(v) == TESTER:
                v = res.tester_move(v, covered)
            else:
                v = res.sut_move(v, covered)
            covered.add(v)
        return covered

    def test_policy_moves_are_edges(self, mirror):
        res = solve_mcg(mirror, "v0")
        for (v, _covered), choice in res.tester_policy().items():
            assert choice in mirror.edges[v]
        for (v, _covered), choice in res.sut_policy().items():
            assert choice in mirror.edges[v]


class TestOptimalSut:
    def test_mirror_bound(self, mirror):
        res = solve_mcg(mirror, "v0")
        assert best_response_gain(mirror, "v0", extract_optimal_sut(res)) == 3

    def test_graph_without_sut_nodes(self):
        g = graph_of(
            {"a": (TESTER, 1, ("b",)), "b": (TESTER, 1, ("a", "b"))},
            init="a",
        )
        res = solve_mcg(g, "a")
        gain = best_response_gain(g, "a", extract_optimal_sut(res))
        assert gain == coverage_gain(g, reachable(g, "a")) == 2

    def test_unsatisfiable_formula_game_exceeds_threshold(self):
        f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")
        g, threshold = sat_to_ncgame(f)
        res = solve_mcg(g, g.init)
        gain = best_response_gain(g, g.init, extract_optimal_sut(res))
        assert gain == res.value
        assert gain > threshold == 5

    def test_optimality_against_search(self):
        rng = random.Random(23)
        for i in range(40):
            n = rng.randint(1, 6)
            g = generate_random(n, 0.5, 1, min(3, n), seed=1100 + i)
            res = solve_mcg(g, g.init)
            sut = extract_optimal_sut(res)
            assert best_response_gain(g, g.init, sut) == res.value
