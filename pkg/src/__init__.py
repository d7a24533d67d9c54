"""
Planar Congestion Router

Routes face-homed demands in embedded planar graphs with congestion at most
2 * ceil(log2 k) + 2, where k bounds the terminals on any face, and
evaluates the counting bound on how many exact-routing invocations such a
scheme needs.
"""

__version__ = "1.0.0"
__author__ = "Planar Congestion Router Team"
__email__ = "team@example.com"

# Core modules
from .config import Settings, get_settings, load_settings
from .models import DriverResult, PlanarInstance, Routing
from .data_loader import load_instance, parse_instance, serialize_instance
from .planar import double, face_terminals, insert_zero_chord, validate
from .cuts import check_cut_condition
from .uncrossing import crossed, plan_level, select_pairs, uncross
from .router import is_eulerian, is_planar_union, route_integer_multiflow, verify_routing
from .congestion import max_terminals_per_face, route_with_bound, theorem_bound
from .bounds import catalan, demand_graph_count, matching_glue_bound, min_invocations, verify_chain
from .generator import generate_instance

__all__ = [
    # Configuration
    "Settings",
    "get_settings",
    "load_settings",
    # Models
    "PlanarInstance",
    "Routing",
    "DriverResult",
    # Documents
    "load_instance",
    "parse_instance",
    "serialize_instance",
    # Embedding
    "validate",
    "face_terminals",
    "insert_zero_chord",
    "double",
    "check_cut_condition",
    # Uncrossing
    "crossed",
    "uncross",
    "select_pairs",
    "plan_level",
    # Routing
    "is_eulerian",
    "is_planar_union",
    "route_integer_multiflow",
    "verify_routing",
    "max_terminals_per_face",
    "theorem_bound",
    "route_with_bound",
    # Counting bound
    "catalan",
    "matching_glue_bound",
    "demand_graph_count",
    "min_invocations",
    "verify_chain",
    # Generator
    "generate_instance",
]
