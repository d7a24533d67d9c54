"""
Pytest configuration and fixtures for the Planar Congestion Router.

This module provides the shared instances and file fixtures used across all
test modules.
"""

from pathlib import Path

import pytest

from src.config import FIGURE_ONE_PATH, FOUR_CYCLE_PATH, SAMPLE_DATA_DIR, Settings, set_settings
from src.data_loader import load_instance, parse_instance
from src.models import Demand, Face, PlanarInstance, SupplyEdge
from src.planar import double


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts and ends with default settings."""
    set_settings(Settings())
    yield
    set_settings(Settings())


@pytest.fixture
def figure1():
    """Octagon-around-hexagon instance with planted capacities."""
    return load_instance(FIGURE_ONE_PATH)


@pytest.fixture
def figure1_trace():
    """Expected uncrossing trace of the figure instance."""
    return (SAMPLE_DATA_DIR / "figure1_trace.txt").read_text(encoding="utf-8")


@pytest.fixture
def four_cycle():
    """Unit 4-cycle with both diagonals homed on one face."""
    return load_instance(FOUR_CYCLE_PATH)


@pytest.fixture
def doubled_four_cycle(four_cycle):
    """The 4-cycle with every capacity and request doubled."""
    return double(four_cycle)


@pytest.fixture
def path_instance():
    """Path s - x - t closed by a zero-capacity edge, one demand st of request 2."""
    return PlanarInstance(
        vertices=("s", "t", "x"),
        edges=(
            SupplyEdge(edge_id="sx", u="s", v="x", capacity=2),
            SupplyEdge(edge_id="xt", u="x", v="t", capacity=3),
            SupplyEdge(edge_id="ts", u="t", v="s", capacity=0),
        ),
        faces=(
            Face(face_id="in", boundary=("s", "x", "t")),
            Face(face_id="out", boundary=("s", "t", "x"), outer=True),
        ),
        demands=(Demand(demand_id="st", s="s", t="t", request=2, home_face="in"),),
    )


@pytest.fixture
def hexagon():
    """Unit hexagon a..f with three demands on the inner face."""
    text = """
    vertex a
    vertex b
    vertex c
    vertex d
    vertex e
    vertex f
    edge ab a b 2
    edge bc b c 2
    edge cd c d 2
    edge de d e 2
    edge ef e f 2
    edge fa f a 2
    face in a b c d e f
    face out a f e d c b outer
    demand x1 a d 1 in
    demand x2 b e 1 in
    demand x3 c f 1 in
    """
    return parse_instance(text)


@pytest.fixture
def instance_text():
    """A small valid instance document."""
    return (
        "# triangle\n"
        "vertex a\n"
        "vertex b\n"
        "vertex c\n"
        "edge e1 a b 1\n"
        "edge e2 b c 2\n"
        "edge e3 c a 1\n"
        "face in a b c\n"
        "face out a c b outer\n"
        "demand q a c 1 in\n"
    )


@pytest.fixture
def instance_file(tmp_path: Path, instance_text):
    """The small instance written to a temporary file."""
    path = tmp_path / "triangle.inst"
    path.write_text(instance_text, encoding="utf-8")
    return path
