"""
Structural operations on embedded planar instances.

Validation of the embedding invariants, terminal ordering along a face,
zero-capacity chord insertion and doubling. All functions are pure and
return new instances.
"""

import logging
from collections import Counter
from typing import Dict, List, Optional, Set

from .config import CHORD_SUFFIX, ERROR_MESSAGES, SPLIT_FACE_SUFFIXES
from .models import (
    Demand,
    Face,
    FaceTerminals,
    PlanarInstance,
    SupplyEdge,
    ValidationReport,
    Violation,
)

logger = logging.getLogger(__name__)


class FaceLookupError(ValueError):
    """Raised when an operation names a face the instance does not have."""
    pass


class ChordError(ValueError):
    """Raised when a zero-capacity chord cannot be inserted."""
    pass


def _duplicates(idents: List[str]) -> List[str]:
    return sorted(ident for ident, count in Counter(idents).items() if count > 1)


def validate(inst: PlanarInstance) -> ValidationReport:
    """
    Check every structural invariant of an instance.

    Violations are returned as data, one entry per offending element.

    Args:
        inst: Instance to check

    Returns:
        ValidationReport whose ``ok`` is True iff all invariants hold
    """
    report = ValidationReport()

    def flag(kind: str, element: str, detail: str = "") -> None:
        report.violations.append(Violation(kind=kind, element=element, detail=detail))

    for kind, idents in (
        ("vertex", list(inst.vertices)),
        ("edge", [e.edge_id for e in inst.edges]),
        ("face", [f.face_id for f in inst.faces]),
        ("demand", [d.demand_id for d in inst.demands]),
    ):
        for ident in _duplicates(idents):
            flag("duplicate_id", ident, f"{kind} identifier used more than once")

    vertex_set = set(inst.vertices)
    face_ids = {f.face_id for f in inst.faces}

    for edge in inst.edges:
        for vertex in (edge.u, edge.v):
            if vertex not in vertex_set:
                flag("unknown_vertex", edge.edge_id, f"endpoint '{vertex}'")
    for face in inst.faces:
        for vertex in face.boundary:
            if vertex not in vertex_set:
                flag("unknown_vertex", face.face_id, f"boundary vertex '{vertex}'")

    euler = len(inst.vertices) - len(inst.edges) + len(inst.faces)
    if euler != 2:
        flag("euler", "instance", f"|V| - |E| + |F| = {euler}")

    outer = [f.face_id for f in inst.faces if f.outer]
    if len(outer) != 1:
        flag("outer_face", ",".join(outer) or "instance", f"{len(outer)} faces marked outer")

    for face in inst.faces:
        repeated = _duplicates(list(face.boundary))
        if repeated:
            flag("face_not_simple", face.face_id, f"repeated vertices {', '.join(repeated)}")

    groups = inst.edges_by_pair()
    sides: Dict[tuple, List[str]] = {}
    for face in inst.faces:
        for side in face.sides():
            sides.setdefault(side, []).append(face.face_id)
            if side not in groups:
                flag("face_side_missing", face.face_id, f"no supply edge {side[0]}-{side[1]}")

    # each of the `mult` parallel edges of a pair borders two distinct faces
    for pair, edges in groups.items():
        mult = len(edges)
        seen_on = sides.get(pair, [])
        per_face = Counter(seen_on)
        if len(seen_on) != 2 * mult or any(count > mult for count in per_face.values()):
            for edge in edges:
                flag("edge_faces", edge.edge_id, f"lies on {len(seen_on)} face sides for {mult} edge(s)")

    for demand in inst.demands:
        if demand.home_face not in face_ids:
            flag("unknown_face", demand.demand_id, f"home face '{demand.home_face}'")
            continue
        face = inst.face(demand.home_face)
        for vertex in (demand.s, demand.t):
            if vertex not in face:
                flag("demand_off_face", demand.demand_id, f"'{vertex}' not on '{face.face_id}'")

    if report.ok:
        logger.info(f"Instance valid: {len(inst.vertices)} vertices, {len(inst.faces)} faces")
    else:
        logger.warning(f"Instance has {len(report.violations)} violations")
    return report


def face_terminals(inst: PlanarInstance, face_id: str) -> FaceTerminals:
    """
    Order the demand endpoints of a face along its boundary.

    The cyclic order starts at the lexicographically smallest terminal and
    follows the stored boundary direction.

    Args:
        inst: Instance
        face_id: Face to inspect

    Returns:
        FaceTerminals (empty when the face carries no demands)

    Raises:
        FaceLookupError: If the face does not exist
    """
    if not inst.has_face(face_id):
        raise FaceLookupError(ERROR_MESSAGES["face_not_found"].format(face=face_id))
    face = inst.face(face_id)

    endpoints: Set[str] = set()
    for demand in inst.demands_on(face_id):
        endpoints.update((demand.s, demand.t))
    if not endpoints:
        return FaceTerminals(face_id=face_id, terminals=())

    start = face.position(min(endpoints))
    n = len(face.boundary)
    rotated = [face.boundary[(start + step) % n] for step in range(n)]
    return FaceTerminals(face_id=face_id, terminals=tuple(v for v in rotated if v in endpoints))


def fresh_identifier(existing: Set[str], stem: str) -> str:
    """Return ``stem``, or ``stem#n`` with the smallest n >= 2 not yet taken."""
    if stem not in existing:
        return stem
    n = 2
    while f"{stem}#{n}" in existing:
        n += 1
    return f"{stem}#{n}"


def insert_zero_chord(
    inst: PlanarInstance, face_id: str, a: str, b: str, edge_id: Optional[str] = None
) -> PlanarInstance:
    """
    Split a face with a capacity-0 chord between two boundary vertices.

    The first new face runs along the stored boundary from ``b`` to ``a``,
    the second from ``a`` to ``b``; both close through the chord. Demands
    of the split face move to the first new face containing both endpoints.

    Args:
        inst: Instance
        face_id: Face to split
        a: First chord endpoint
        b: Second chord endpoint
        edge_id: Identifier for the chord (derived from the face id if omitted)

    Returns:
        New instance with one more edge and one more face

    Raises:
        FaceLookupError: If the face does not exist
        ChordError: If an endpoint is off the face, a == b, or a demand of
            the face would straddle the chord
    """
    if not inst.has_face(face_id):
        raise FaceLookupError(ERROR_MESSAGES["face_not_found"].format(face=face_id))
    if a == b:
        raise ChordError(ERROR_MESSAGES["chord_degenerate"].format(vertex=a))
    face = inst.face(face_id)
    for vertex in (a, b):
        if vertex not in face:
            raise ChordError(ERROR_MESSAGES["chord_endpoint"].format(vertex=vertex, face=face_id))

    n = len(face.boundary)
    pa, pb = face.position(a), face.position(b)
    b_to_a = tuple(face.boundary[(pb + step) % n] for step in range((pa - pb) % n + 1))
    a_to_b = tuple(face.boundary[(pa + step) % n] for step in range((pb - pa) % n + 1))

    face_ids = {f.face_id for f in inst.faces}
    first_id = fresh_identifier(face_ids, face_id + SPLIT_FACE_SUFFIXES[0])
    second_id = fresh_identifier(face_ids | {first_id}, face_id + SPLIT_FACE_SUFFIXES[1])
    first = Face(face_id=first_id, boundary=b_to_a, outer=face.outer)
    second = Face(face_id=second_id, boundary=a_to_b, outer=False)

    chord_id = edge_id or fresh_identifier({e.edge_id for e in inst.edges}, face_id + CHORD_SUFFIX)
    if any(e.edge_id == chord_id for e in inst.edges):
        raise ChordError(ERROR_MESSAGES["duplicate_id"].format(kind="edge", ident=chord_id))
    chord = SupplyEdge(edge_id=chord_id, u=a, v=b, capacity=0)

    demands: List[Demand] = []
    for demand in inst.demands:
        if demand.home_face != face_id:
            demands.append(demand)
        elif demand.s in first and demand.t in first:
            demands.append(demand.model_copy(update={"home_face": first_id}))
        elif demand.s in second and demand.t in second:
            demands.append(demand.model_copy(update={"home_face": second_id}))
        else:
            logger.error(f"Demand {demand.demand_id} straddles chord {a}-{b}")
            raise ChordError(ERROR_MESSAGES["chord_straddle"].format(
                ident=demand.demand_id, a=a, b=b, face=face_id))

    faces = [f for f in inst.faces if f.face_id != face_id] + [first, second]
    logger.debug(f"Split face {face_id} at {a}-{b} into {first_id}, {second_id}")
    return inst.model_copy(update={
        "edges": inst.edges + (chord,),
        "faces": tuple(faces),
        "demands": tuple(demands),
    })


def double(inst: PlanarInstance) -> PlanarInstance:
    """Multiply every capacity and request by two."""
    return inst.model_copy(update={
        "edges": tuple(e.model_copy(update={"capacity": 2 * e.capacity}) for e in inst.edges),
        "demands": tuple(d.model_copy(update={"request": 2 * d.request}) for d in inst.demands),
    })


def vertex_degree_sums(inst: PlanarInstance) -> Dict[str, int]:
    """Incident capacity plus incident request, per vertex."""
    sums = {v: 0 for v in inst.vertices}
    for edge in inst.edges:
        sums[edge.u] += edge.capacity
        sums[edge.v] += edge.capacity
    for demand in inst.demands:
        sums[demand.s] += demand.request
        sums[demand.t] += demand.request
    return sums
