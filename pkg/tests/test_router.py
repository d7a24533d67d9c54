"""
Unit tests for the router module.

This module tests the exact integer multiflow search against an independent
path enumeration, the routability contract on planar-union instances, load
bookkeeping and routing verification.
"""

import networkx as nx
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.config import Settings, get_settings, set_settings
from src.cuts import check_cut_condition
from src.data_loader import parse_instance
from src.generator import (
    build_params,
    generate_instance,
    generate_planar_union_instance,
    plant_capacities,
    shorter_arc,
)
from src.models import Routing
from src.planar import double
from src.router import (
    MultiflowSearch,
    RouterBudgetExceeded,
    RouterContractViolation,
    build_routing,
    half_integral_routing,
    is_eulerian,
    is_planar_union,
    loop_erase,
    route_integer_multiflow,
    verify_routing,
)
from src.uncrossing import non_crossing_subset


def exhaustive_routable(inst):
    """Try every simple path for every demand unit, pruning only on capacity."""
    capacity = dict(inst.pair_capacities())
    graph = nx.Graph()
    graph.add_nodes_from(inst.vertices)
    graph.add_edges_from(capacity)
    demands = sorted(inst.demands, key=lambda d: d.demand_id)
    units = [index for index, d in enumerate(demands) for _ in range(d.request)]
    paths = [sorted(nx.all_simple_paths(graph, d.s, d.t)) for d in demands]

    failed = set()

    def place(position, start):
        if position == len(units):
            return True
        state = (position, start, tuple(sorted(capacity.items())))
        if state in failed:
            return False
        index = units[position]
        for choice in range(start, len(paths[index])):
            path = paths[index][choice]
            keys = [tuple(sorted(step)) for step in zip(path, path[1:])]
            if all(capacity[key] > 0 for key in keys):
                for key in keys:
                    capacity[key] -= 1
                following = position + 1
                same = following < len(units) and units[following] == index
                found = place(following, choice if same else 0)
                for key in keys:
                    capacity[key] += 1
                if found:
                    return True
        failed.add(state)
        return False

    return place(0, 0)


def trimmed(inst, total):
    """Keep demands in id order while their requests fit in ``total``."""
    kept = []
    for demand in sorted(inst.demands, key=lambda d: d.demand_id):
        if demand.request <= total:
            kept.append(demand)
            total -= demand.request
    return inst.with_demands(kept)


@pytest.fixture
def parallel_instance():
    """Two parallel a-b edges of capacities 1 and 2."""
    return parse_instance(
        "vertex a\nvertex b\n"
        "edge p a b 1\nedge q a b 2\n"
        "face f1 a b\nface f2 a b outer\n"
        "demand ab a b 3 f1\n"
    )


class TestPredicates:
    """Test cases for the Eulerian and planar-union predicates."""

    def test_eulerian(self, four_cycle, doubled_four_cycle):
        """Test that doubling makes the odd 4-cycle Eulerian."""
        assert not is_eulerian(four_cycle)
        assert is_eulerian(doubled_four_cycle)

    def test_planar_union(self, four_cycle, figure1, path_instance):
        """Test crossed and non-crossed demand sets."""
        assert not is_planar_union(four_cycle)
        assert not is_planar_union(figure1)
        assert is_planar_union(non_crossing_subset(figure1))
        assert is_planar_union(path_instance)


class TestLoopErase:
    """Test cases for loop erasure."""

    def test_simple_walk_unchanged(self):
        """Test that a simple path is returned as is."""
        assert loop_erase(["a", "b", "c"]) == ("a", "b", "c")

    def test_cycles_removed(self):
        """Test that revisits cut out the loop between them."""
        assert loop_erase(["a", "b", "c", "b", "d"]) == ("a", "b", "d")
        assert loop_erase(["a", "b", "c", "a", "d"]) == ("a", "d")

    def test_nested_loops(self):
        """Test a loop inside a loop."""
        assert loop_erase(["a", "b", "c", "d", "c", "b", "e"]) == ("a", "b", "e")


class TestBuildRouting:
    """Test cases for load and congestion bookkeeping."""

    def test_path_loads(self, path_instance):
        """Test loads and alpha of the two-unit path routing."""
        routing = build_routing(path_instance, {"st": [("s", "x", "t"), ("s", "x", "t")]})

        assert routing.loads == {"sx": 2, "xt": 2, "ts": 0}
        assert routing.alpha == 1

    def test_zero_capacity_loaded(self, path_instance):
        """Test that loading a capacity-0 edge leaves alpha unbounded."""
        routing = build_routing(path_instance, {"st": [("s", "t"), ("s", "x", "t")]})

        assert routing.loads["ts"] == 1
        assert routing.alpha is None
        assert not routing.bounded

    def test_parallel_edges_share_by_capacity(self, parallel_instance):
        """Test the proportional split over parallel edges."""
        routing = build_routing(parallel_instance, {"ab": [("a", "b")] * 3})
        assert routing.loads == {"p": 1, "q": 2}
        assert routing.alpha == 1

    def test_largest_remainder(self, parallel_instance):
        """Test that leftover units go to the larger remainder."""
        routing = build_routing(parallel_instance, {"ab": [("a", "b")] * 4})
        assert routing.loads == {"p": 1, "q": 3}
        assert routing.alpha == 2


class TestRouteIntegerMultiflow:
    """Test cases for the exact router."""

    def test_four_cycle_is_infeasible(self, four_cycle):
        """Test the classic non-Eulerian 4-cycle with both diagonals."""
        assert check_cut_condition(four_cycle) is None
        assert route_integer_multiflow(four_cycle) is None

    def test_doubled_four_cycle_routes(self, doubled_four_cycle):
        """Test that the doubled 4-cycle routes within capacity."""
        routing = route_integer_multiflow(doubled_four_cycle)

        assert routing is not None
        assert routing.alpha == 1
        assert verify_routing(doubled_four_cycle, routing, 1) is None

    def test_half_integral(self, four_cycle):
        """Test that the half-integral routing has two walks per unit."""
        routing = half_integral_routing(four_cycle)

        assert routing is not None
        assert routing.walk_count() == 4

    def test_path_instance(self, path_instance):
        """Test that the zero-capacity edge is never used."""
        routing = route_integer_multiflow(path_instance)

        assert routing is not None
        assert routing.assignments == {"st": [("s", "x", "t"), ("s", "x", "t")]}
        assert routing.loads["ts"] == 0

    def test_budget_exceeded(self, doubled_four_cycle):
        """Test that a tiny expansion budget abandons the search."""
        with pytest.raises(RouterBudgetExceeded, match="search abandoned"):
            route_integer_multiflow(doubled_four_cycle, budget=1)

    def test_contract_violation(self, monkeypatch, path_instance):
        """Test that a failed search on a routable planar-union instance raises."""
        monkeypatch.setattr("src.router.MultiflowSearch.run", lambda self: None)
        with pytest.raises(RouterContractViolation):
            route_integer_multiflow(double(path_instance))

    @settings(max_examples=60, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**32),
        vertices=st.integers(min_value=3, max_value=10),
        cut=st.integers(min_value=0, max_value=20),
    )
    def test_matches_exhaustive_enumeration(self, seed, vertices, cut):
        """Test the feasibility verdict against plain path enumeration."""
        inst = generate_instance(build_params(
            seed=seed, vertex_budget=vertices, face_demand_budget=2, max_request=2, slack=0,
        ))
        assume(len(inst.edges) <= 14)
        inst = trimmed(inst, 8)
        assume(inst.demands)
        inst = plant_capacities(inst, 0, shorter_arc)
        if cut < len(inst.edges):
            edge = inst.edges[cut]
            lowered = edge.model_copy(update={"capacity": max(edge.capacity - 1, 0)})
            inst = inst.model_copy(update={
                "edges": tuple(lowered if e is edge else e for e in inst.edges)
            })

        routing = route_integer_multiflow(inst)
        assert (routing is not None) == exhaustive_routable(inst)
        if routing is not None:
            assert verify_routing(inst, routing, 1) is None

    def test_vertex_cut_fallback(self, four_cycle, doubled_four_cycle):
        """Test the verdicts when only single-vertex cuts are tracked."""
        set_settings(Settings(router_cut_table_limit=1))

        assert route_integer_multiflow(four_cycle) is None
        routing = route_integer_multiflow(doubled_four_cycle)
        assert routing is not None
        assert verify_routing(doubled_four_cycle, routing, 1) is None

    def test_memo_limit_zero(self, four_cycle):
        """Test that a search without memo still proves infeasibility."""
        set_settings(Settings(router_memo_limit=0, router_cut_table_limit=1))

        search = MultiflowSearch(four_cycle, budget=10_000)
        assert search.run() is None
        assert search.failed == set()

    def test_candidate_paths_shortest_first(self, hexagon):
        """Test that candidates come by edge count, ties in lexicographic order."""
        search = MultiflowSearch(hexagon, budget=10)
        index = next(i for i, d in enumerate(search.demands) if {d.s, d.t} == {"a", "d"})
        walks = []
        choice = 0
        while (candidate := search.paths[index].get(choice)) is not None:
            walks.append(candidate[0])
            choice += 1

        assert walks == [("a", "b", "c", "d"), ("a", "f", "e", "d")]

    def test_generated_twelve_vertices(self):
        """Test a generated 12-vertex instance whose search used to run out of budget."""
        inst = non_crossing_subset(generate_instance(build_params(
            seed=13, vertex_budget=12, face_demand_budget=3, max_request=2, slack=0,
        )))
        doubled = double(inst)

        search = MultiflowSearch(doubled, get_settings().router_budget)
        assignments = search.run()
        assert assignments is not None
        assert search.expansions == len(search.units)

        routing = half_integral_routing(inst)
        assert verify_routing(doubled, routing, 1) is None


@pytest.mark.slow
class TestPlanarUnionContract:
    """Property test: Eulerian planar-union instances with the cut condition route."""

    @settings(max_examples=200, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**63),
        vertices=st.integers(min_value=3, max_value=14),
        face_demands=st.integers(min_value=1, max_value=4),
        max_request=st.integers(min_value=1, max_value=2),
        slack=st.integers(min_value=0, max_value=1),
    )
    def test_doubled_planar_union_routes(self, seed, vertices, face_demands, max_request, slack):
        """Test that the router routes such an instance without backtracking."""
        inst = double(generate_planar_union_instance(build_params(
            seed=seed, vertex_budget=vertices, face_demand_budget=face_demands,
            max_request=max_request, slack=slack,
        )))
        assert is_eulerian(inst)
        assert is_planar_union(inst)
        assert check_cut_condition(inst) is None

        search = MultiflowSearch(inst, get_settings().router_budget)
        assert search.run() is not None
        assert search.expansions == len(search.units)

        routing = route_integer_multiflow(inst)
        assert routing is not None
        assert verify_routing(inst, routing, 1) is None


class TestVerifyRouting:
    """Test cases for the independent routing checker."""

    def test_valid_routing(self, path_instance):
        """Test that a correct routing passes."""
        routing = build_routing(path_instance, {"st": [("s", "x", "t")] * 2})
        assert verify_routing(path_instance, routing, 1) is None

    def test_unknown_demand(self, path_instance):
        """Test walks for a demand the instance does not have."""
        routing = Routing(assignments={"st": [("s", "x", "t")] * 2, "zz": [("s", "x")]})
        assert verify_routing(path_instance, routing, 1).kind == "unknown_demand"

    def test_demand_count(self, path_instance):
        """Test a demand with fewer walks than its request."""
        violation = verify_routing(path_instance, Routing(assignments={"st": [("s", "x", "t")]}), 1)

        assert violation.kind == "demand_count"
        assert violation.element == "st"

    def test_wrong_endpoints(self, path_instance):
        """Test a walk that stops short of its target."""
        routing = Routing(assignments={"st": [("s", "x"), ("s", "x", "t")]})
        assert verify_routing(path_instance, routing, 1).kind == "walk_endpoints"

    def test_reversed_walk_accepted(self, path_instance):
        """Test that walks are undirected."""
        routing = Routing(assignments={"st": [("t", "x", "s"), ("s", "x", "t")]})
        assert verify_routing(path_instance, routing, 1) is None

    def test_not_an_edge(self, four_cycle):
        """Test a walk that jumps across a non-edge."""
        routing = Routing(assignments={"d13": [("u1", "u3")], "d24": [("u2", "u3", "u4")]})
        violation = verify_routing(four_cycle, routing, 1)

        assert violation.kind == "not_an_edge"
        assert violation.detail == "u1-u3"

    def test_zero_capacity_loaded(self, path_instance):
        """Test that any load on a capacity-0 edge fails at every alpha."""
        routing = Routing(assignments={"st": [("s", "t"), ("s", "x", "t")]})
        violation = verify_routing(path_instance, routing, 100)

        assert violation.kind == "zero_capacity_loaded"
        assert violation.element == "s-t"

    def test_capacity_exceeded(self, four_cycle):
        """Test congestion checks at alpha 1 and 2."""
        routing = Routing(assignments={
            "d13": [("u1", "u2", "u3")],
            "d24": [("u2", "u1", "u4")],
        })
        violation = verify_routing(four_cycle, routing, 1)

        assert violation.kind == "capacity_exceeded"
        assert violation.element == "u1-u2"
        assert verify_routing(four_cycle, routing, 2) is None

    def test_stored_loads_must_match(self, path_instance):
        """Test that stored loads are checked against the walks."""
        routing = build_routing(path_instance, {"st": [("s", "x", "t")] * 2})
        tampered = routing.model_copy(update={"loads": {"sx": 1, "xt": 2, "ts": 0}})
        violation = verify_routing(path_instance, tampered, 1)

        assert violation.kind == "load_mismatch"
        assert violation.element == "s-x"

    def test_stored_load_on_unknown_edge(self, path_instance):
        """Test a stored load naming no edge."""
        routing = build_routing(path_instance, {"st": [("s", "x", "t")] * 2})
        tampered = routing.model_copy(update={"loads": {**routing.loads, "nope": 0}})
        assert verify_routing(path_instance, tampered, 1).kind == "load_mismatch"
