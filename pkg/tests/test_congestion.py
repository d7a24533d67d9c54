"""
Unit tests for the congestion module.

This module tests the bound arithmetic, the recursive driver on the shipped
instances and the congestion guarantee on generated instances.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.congestion import (
    CongestionError,
    CutConditionViolated,
    InvalidInstanceError,
    RecursionDepthExceeded,
    _Recursion,
    max_terminals_per_face,
    route_with_bound,
    theorem_bound,
)
from src.generator import build_params, generate_instance
from src.models import Demand
from src.router import half_integral_routing, verify_routing


class TestTheoremBound:
    """Test cases for the bound 2 * ceil(log2 k) + 2."""

    @pytest.mark.parametrize("k, expected", [
        (1, 2), (2, 4), (3, 6), (4, 6), (5, 8), (6, 8), (8, 8), (9, 10), (16, 10), (17, 12),
    ])
    def test_values(self, k, expected):
        """Test the bound at and around powers of two."""
        assert theorem_bound(k) == expected

    def test_non_positive(self):
        """Test that k must be positive."""
        with pytest.raises(CongestionError, match="k must be positive"):
            theorem_bound(0)

    def test_terminal_counts(self, figure1, four_cycle):
        """Test the largest number of terminals on a face."""
        assert max_terminals_per_face(figure1) == 8
        assert max_terminals_per_face(four_cycle) == 4
        assert max_terminals_per_face(four_cycle.with_demands([])) == 0


class TestRouteWithBound:
    """Test cases for the recursive driver."""

    def test_four_cycle(self, four_cycle):
        """Test the composed walks and congestion on the 4-cycle."""
        result = route_with_bound(four_cycle)

        assert result.routing.assignments == {
            "d13": [("u1", "u4", "u3")],
            "d24": [("u2", "u1", "u4")],
        }
        assert result.routing.loads == {"e12": 1, "e23": 0, "e34": 1, "e41": 2}
        assert result.alpha == 2
        assert (result.k, result.bound, result.levels) == (4, 6, 2)
        assert [(a.level, a.faces_processed, a.pairs) for a in result.per_level] == [
            (1, ["inner"], 1)
        ]
        assert result.per_level[0].white_loads == {"e41": 2}

    def test_single_demand(self, path_instance):
        """Test that a planar-union input is routed at the first level."""
        result = route_with_bound(path_instance)

        assert result.levels == 1
        assert result.alpha == 1
        assert result.per_level == []
        assert result.routing.loads["ts"] == 0

    def test_no_demands(self, four_cycle):
        """Test the empty demand set."""
        result = route_with_bound(four_cycle.with_demands([]))

        assert result.routing.walk_count() == 0
        assert (result.k, result.bound, result.levels) == (0, 2, 0)

    def test_hexagon(self, hexagon):
        """Test three mutually crossing diagonals."""
        result = route_with_bound(hexagon)

        assert result.k == 6
        assert result.bound == 8
        assert result.levels <= 4
        assert verify_routing(hexagon, result.routing, result.bound) is None

    @pytest.mark.slow
    def test_figure(self, figure1):
        """Test the figure instance end to end."""
        result = route_with_bound(figure1)

        assert (result.k, result.bound, result.levels) == (8, 8, 2)
        assert result.alpha <= 8
        assert verify_routing(figure1, result.routing, 8) is None
        assert result.per_level[0].faces_processed == ["f0", "f7"]
        assert result.per_level[0].pairs == 3

    def test_cut_condition_violated(self, four_cycle):
        """Test that an over-subscribed cut is reported with its witness."""
        heavy = Demand(demand_id="d12", s="u1", t="u2", request=2, home_face="inner")
        inst = four_cycle.with_demands(four_cycle.demands + (heavy,))

        with pytest.raises(CutConditionViolated) as excinfo:
            route_with_bound(inst)
        assert excinfo.value.witness.side == ("u1", "u4")
        assert "cut condition violated" in str(excinfo.value)

    def test_invalid_instance(self, four_cycle):
        """Test that structural violations stop the driver."""
        broken = four_cycle.model_copy(update={"faces": four_cycle.faces[:1]})
        with pytest.raises(InvalidInstanceError, match="euler"):
            route_with_bound(broken)

    def test_depth_limit(self, four_cycle):
        """Test that recursion beyond the level limit raises."""
        with pytest.raises(RecursionDepthExceeded, match="level 2"):
            _Recursion(max_levels=1).solve(four_cycle, 1)

    def test_generated_twelve_vertices(self):
        """Test a generated 12-vertex instance with two-unit requests end to end."""
        inst = generate_instance(build_params(
            seed=13, vertex_budget=12, face_demand_budget=3, max_request=2, slack=0,
        ))
        result = route_with_bound(inst)

        assert result.bound == theorem_bound(max(max_terminals_per_face(inst), 2))
        assert verify_routing(inst, result.routing, result.bound) is None

    def test_base_case_routes_half_integrally(self, monkeypatch, path_instance):
        """Test that a non-crossing level goes through the half-integral router."""
        calls = []

        def spy(inst, budget=None):
            calls.append(inst)
            return half_integral_routing(inst, budget)

        monkeypatch.setattr("src.congestion.half_integral_routing", spy)
        route_with_bound(path_instance)

        assert calls == [path_instance]


@pytest.mark.slow
class TestCongestionGuarantee:
    """Property test: generated feasible instances route within the bound."""

    @settings(max_examples=100, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**63),
        vertices=st.integers(min_value=4, max_value=14),
        face_demands=st.integers(min_value=2, max_value=4),
        max_request=st.integers(min_value=1, max_value=2),
        slack=st.integers(min_value=0, max_value=1),
    )
    def test_bound_holds(self, seed, vertices, face_demands, max_request, slack):
        """Test the congestion bound, the level count and the white loads."""
        inst = generate_instance(build_params(
            seed=seed, vertex_budget=vertices, face_demand_budget=face_demands,
            max_request=max_request, slack=slack,
        ))
        k = max_terminals_per_face(inst)
        assert k <= 8

        result = route_with_bound(inst)
        effective = max(k, 2) if inst.demands else 1
        assert result.bound == theorem_bound(effective)
        assert verify_routing(inst, result.routing, result.bound) is None
        assert result.levels <= (effective - 1).bit_length() + 1
        assert result.routing.alpha is not None

        capacities = {e.edge_id: e.capacity for e in inst.edges}
        for audit in result.per_level:
            for eid, load in audit.white_loads.items():
                assert load <= 2 * capacities.get(eid, 0)
