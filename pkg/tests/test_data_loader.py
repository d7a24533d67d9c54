"""
Unit tests for the data_loader module.

This module tests parsing, serialization and file loading of instance and
routing documents.
"""

import io

import pytest

from src.config import FIGURE_ONE_PATH
from src.data_loader import (
    InstanceFormatError,
    RoutingFormatError,
    load_instance,
    load_routing,
    parse_instance,
    parse_routing,
    serialize_instance,
    serialize_routing,
)
from src.models import Routing


class TestInstanceParsing:
    """Test cases for reading instance documents."""

    def test_parse_valid_document(self, instance_text):
        """Test that every record of a valid document is read."""
        inst = parse_instance(instance_text)

        assert inst.vertices == ("a", "b", "c")
        assert [e.edge_id for e in inst.edges] == ["e1", "e2", "e3"]
        assert inst.edge("e2").capacity == 2
        assert inst.face("out").outer
        assert not inst.face("in").outer
        assert inst.demand("q").home_face == "in"

    def test_comments_and_blank_lines_ignored(self):
        """Test that comments and blank lines carry no records."""
        inst = parse_instance("# header\n\nvertex a   # trailing\n\n")
        assert inst.vertices == ("a",)

    def test_parallel_demands_keep_identifiers(self, instance_text):
        """Test that two demands on the same pair stay separate."""
        inst = parse_instance(instance_text + "demand q2 a c 2 in\n")

        assert {d.demand_id for d in inst.demands} == {"q", "q2"}
        assert inst.aggregated_requests("in") == {("a", "c"): 3}

    def test_vertices_may_follow_their_uses(self):
        """Test that vertex lines can come after the edges, faces and demands using them."""
        inst = parse_instance(
            "edge x a b 1\nedge y b c 1\nedge z c a 1\n"
            "face in a b c\nface out a c b outer\n"
            "demand q a c 1 in\n"
            "vertex a\nvertex b\nvertex c\n"
        )

        assert inst.vertices == ("a", "b", "c")
        assert inst.demand("q").pair == ("a", "c")

    def test_missing_vertex_reported_at_first_use(self):
        """Test that an undeclared vertex names the line that used it."""
        with pytest.raises(InstanceFormatError, match="line 1: unknown vertex 'c' in edge 'x'"):
            parse_instance("edge x a c 1\nvertex a\nedge y a b 1\nvertex b\n")

    def test_figure_document_loads(self):
        """Test that the shipped figure instance loads."""
        inst = load_instance(FIGURE_ONE_PATH)

        assert len(inst.vertices) == 14
        assert len(inst.edges) == 20
        assert len(inst.faces) == 8
        assert inst.total_request == 27

    @pytest.mark.parametrize("text, message", [
        ("vertex a\nvertex a\n", "line 2: duplicate vertex identifier 'a'"),
        ("vertex a\nedge e a b 1\n", "line 2: unknown vertex 'b'"),
        ("vertex a\nvertex b\nedge e a b x\n", "line 3: 'x' is not a nonnegative integer"),
        ("vertex a\nvertex b\nedge e a b -1\n", "not a nonnegative integer"),
        ("vertex outer\n", "reserved"),
        ("vertices a\n", "line 1: unknown keyword 'vertices'"),
        ("vertex a b\n", "'vertex' expects 1 tokens, got 2"),
        ("vertex a\nedge e a a 1\n", "invalid edge 'e'"),
    ])
    def test_malformed_documents(self, text, message):
        """Test that malformed records raise with their line number."""
        with pytest.raises(InstanceFormatError, match=message):
            parse_instance(text)

    def test_zero_request_rejected(self, instance_text):
        """Test that requests must be positive."""
        with pytest.raises(InstanceFormatError, match="invalid demand 'bad'"):
            parse_instance(instance_text + "demand bad a b 0 in\n")

    def test_demand_off_home_face(self, instance_text):
        """Test that a demand endpoint must lie on its home face."""
        text = instance_text + "vertex z\ndemand far a z 1 in\n"
        with pytest.raises(InstanceFormatError, match="'z' is not on face 'in'"):
            parse_instance(text)

    def test_unknown_home_face(self, instance_text):
        """Test that a demand must name an existing face."""
        with pytest.raises(InstanceFormatError, match="unknown face 'nowhere'"):
            parse_instance(instance_text + "demand lost a b 1 nowhere\n")

    def test_outer_face_count(self):
        """Test that exactly one face is marked outer."""
        text = "vertex a\nvertex b\nvertex c\nface f a b c\nface g a c b\n"
        with pytest.raises(InstanceFormatError, match="found 0"):
            parse_instance(text)


class TestInstanceSerialization:
    """Test cases for canonical instance output."""

    def test_serialization_is_sorted(self):
        """Test that records come out sorted by identifier within each kind."""
        inst = parse_instance(
            "vertex b\nvertex a\nvertex c\n"
            "edge z a b 1\nedge y b c 1\nedge x c a 1\n"
            "face out a c b outer\nface in a b c\n"
            "demand q2 b c 1 in\ndemand q1 a b 1 in\n"
        )
        lines = serialize_instance(inst).splitlines()

        assert lines[:3] == ["vertex a", "vertex b", "vertex c"]
        assert lines[3:6] == ["edge x c a 1", "edge y b c 1", "edge z a b 1"]
        assert lines[6:8] == ["face in a b c", "face out a c b outer"]
        assert lines[8:] == ["demand q1 a b 1 in", "demand q2 b c 1 in"]

    def test_figure_serialization_is_stable(self, figure1):
        """Test that serializing a parsed serialization changes nothing."""
        text = serialize_instance(figure1)
        assert serialize_instance(parse_instance(text)) == text


class TestFileLoading:
    """Test cases for reading documents from disk and stdin."""

    def test_load_from_file(self, instance_file):
        """Test loading from a path."""
        assert len(load_instance(instance_file).demands) == 1

    def test_load_from_stdin(self, monkeypatch, instance_text):
        """Test that '-' reads standard input."""
        monkeypatch.setattr("sys.stdin", io.StringIO(instance_text))
        assert load_instance("-").vertices == ("a", "b", "c")

    def test_missing_file(self, tmp_path):
        """Test that an unreadable file raises a format error."""
        with pytest.raises(InstanceFormatError, match="Could not read"):
            load_instance(tmp_path / "missing.inst")


class TestRoutingDocuments:
    """Test cases for the routing format."""

    def test_parse_routing(self):
        """Test reading paths, loads and alpha."""
        routing = parse_routing(
            "path d1 a b c\npath d1 a c\npath d2 b c\nload e1 2\nload e2 0\nalpha 2\n"
        )

        assert routing.assignments == {"d1": [("a", "b", "c"), ("a", "c")], "d2": [("b", "c")]}
        assert routing.loads == {"e1": 2, "e2": 0}
        assert routing.alpha == 2

    def test_unbounded_alpha(self):
        """Test that 'alpha inf' marks a loaded zero-capacity edge."""
        assert parse_routing("alpha inf\n").alpha is None

    def test_serialize_routing(self):
        """Test the canonical routing layout."""
        routing = Routing(
            assignments={"d2": [("b", "c")], "d1": [("a", "b")]},
            loads={"e2": 1, "e1": 1},
            alpha=None,
        )
        assert serialize_routing(routing) == (
            "path d1 a b\npath d2 b c\nload e1 1\nload e2 1\nalpha inf\n"
        )

    @pytest.mark.parametrize("text, message", [
        ("path d1 a\n", "expects at least 3"),
        ("load e1 1\nload e1 2\n", "duplicate load identifier 'e1'"),
        ("alpha\n", "expects 1 tokens"),
        ("route d1 a b\n", "unknown keyword 'route'"),
    ])
    def test_malformed_routing(self, text, message):
        """Test that malformed routing records raise."""
        with pytest.raises(RoutingFormatError, match=message):
            parse_routing(text)

    def test_load_routing_missing(self, tmp_path):
        """Test that a missing routing file raises a format error."""
        with pytest.raises(RoutingFormatError):
            load_routing(tmp_path / "none.routing")
