"""
Seeded instance generator with planted feasibility.

Instances are outerplanar: a cycle subdivided by non-crossing chords, so
every face is read off the subdivision directly. Demands are sampled on
faces and every demand unit is routed along one of the two boundary arcs of
its face; capacities are the resulting loads plus a slack, which makes the
planted routing a witness for the cut condition.
"""

import logging
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
from pydantic import ValidationError

from .config import ERROR_MESSAGES, get_settings
from .models import Demand, Face, GeneratorParams, PlanarInstance, SupplyEdge, Walk, pair_key
from .uncrossing import non_crossing_subset

logger = logging.getLogger(__name__)

ArcChooser = Callable[[Walk, Walk], int]


class GeneratorError(ValueError):
    """Custom exception for generator parameter errors."""
    pass


def build_params(**overrides: Any) -> GeneratorParams:
    """
    Generator parameters with configured defaults for omitted fields.

    Raises:
        GeneratorError: If a value is out of range
    """
    settings = get_settings()
    values: Dict[str, Any] = {
        "vertex_budget": settings.default_vertex_budget,
        "face_demand_budget": settings.default_face_demand_budget,
        "max_request": settings.default_max_request,
        "slack": settings.default_slack,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return GeneratorParams(**values)
    except ValidationError as e:
        raise GeneratorError(ERROR_MESSAGES["generator_budget"].format(
            detail="; ".join(f"{err['loc'][0]}: {err['msg']}" for err in e.errors())))


def boundary_arcs(face: Face, s: str, t: str) -> Tuple[Walk, Walk]:
    """The two boundary walks from s to t: along the stored direction and against it."""
    n = len(face.boundary)
    ps, pt = face.position(s), face.position(t)
    forward = tuple(face.boundary[(ps + step) % n] for step in range((pt - ps) % n + 1))
    backward = tuple(face.boundary[(ps - step) % n] for step in range((ps - pt) % n + 1))
    return forward, backward


def shorter_arc(forward: Walk, backward: Walk) -> int:
    """Pick the arc with fewer edges, the stored direction on ties."""
    return 0 if len(forward) <= len(backward) else 1


def plant_capacities(inst: PlanarInstance, slack: int, choose_arc: ArcChooser) -> PlanarInstance:
    """
    Set every capacity to the load of a boundary-arc routing plus ``slack``.

    Args:
        inst: Instance whose demands are homed on faces
        slack: Nonnegative amount added to every edge
        choose_arc: Returns 0 (stored direction) or 1 for each demand unit

    Returns:
        Instance with planted capacities; demands and faces unchanged
    """
    groups = inst.edges_by_pair()
    loads: Dict[str, int] = {e.edge_id: 0 for e in inst.edges}
    for demand in sorted(inst.demands, key=lambda d: d.demand_id):
        arcs = boundary_arcs(inst.face(demand.home_face), demand.s, demand.t)
        for _ in range(demand.request):
            arc = arcs[choose_arc(*arcs)]
            for a, b in zip(arc, arc[1:]):
                loads[groups[pair_key(a, b)][0].edge_id] += 1
    edges = tuple(
        e.model_copy(update={"capacity": loads[e.edge_id] + slack}) for e in inst.edges
    )
    return inst.model_copy(update={"edges": edges})


def _subdivide(rng: np.random.Generator, n: int) -> Tuple[List[Tuple[int, int]], List[List[int]]]:
    """Split the n-gon by random non-crossing chords; returns chords and inner faces."""
    faces: List[List[int]] = [list(range(n))]
    chords: List[Tuple[int, int]] = []
    target = int(rng.integers(0, n - 2))
    while len(chords) < target:
        splittable = [index for index, face in enumerate(faces) if len(face) >= 4]
        if not splittable:
            break
        face = faces.pop(splittable[int(rng.integers(0, len(splittable)))])
        size = len(face)
        p = int(rng.integers(0, size))
        q = (p + int(rng.integers(2, size - 1))) % size
        p, q = min(p, q), max(p, q)
        faces.append(face[p : q + 1])
        faces.append(face[q:] + face[: p + 1])
        chords.append((face[p], face[q]))
    return chords, faces


def generate_instance(params: GeneratorParams) -> PlanarInstance:
    """
    Generate an outerplanar instance that satisfies the cut condition.

    Args:
        params: Seed and budgets

    Returns:
        Instance with vertices v00.., edges e00.., faces f00.. (f00 outer)
        and demands d00..
    """
    rng = np.random.default_rng(params.seed)
    n = params.vertex_budget
    names = [f"v{i:02d}" for i in range(n)]

    chords, inner = _subdivide(rng, n)
    pairs = [(i, (i + 1) % n) for i in range(n)] + chords
    edges = tuple(
        SupplyEdge(edge_id=f"e{index:02d}", u=names[a], v=names[b], capacity=0)
        for index, (a, b) in enumerate(pairs)
    )
    cycles = [list(range(n))] + inner
    faces = tuple(
        Face(face_id=f"f{index:02d}", boundary=tuple(names[v] for v in cycle), outer=index == 0)
        for index, cycle in enumerate(cycles)
    )

    demands: List[Demand] = []
    for face in faces:
        for _ in range(int(rng.integers(0, params.face_demand_budget + 1))):
            a, b = rng.choice(len(face.boundary), size=2, replace=False)
            demands.append(Demand(
                demand_id=f"d{len(demands):02d}",
                s=face.boundary[int(a)],
                t=face.boundary[int(b)],
                request=int(rng.integers(1, params.max_request + 1)),
                home_face=face.face_id,
            ))

    inst = PlanarInstance(vertices=tuple(names), edges=edges, faces=faces, demands=tuple(demands))
    planted = plant_capacities(inst, params.slack, lambda fwd, bwd: int(rng.integers(0, 2)))
    logger.info(
        f"Generated seed {params.seed}: {n} vertices, {len(edges)} edges, "
        f"{len(faces)} faces, {len(demands)} demands"
    )
    return planted


def generate_planar_union_instance(params: GeneratorParams) -> PlanarInstance:
    """Generated instance with crossing demands dropped greedily per face, in id order."""
    return non_crossing_subset(generate_instance(params))
