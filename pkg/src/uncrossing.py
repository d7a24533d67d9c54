"""
Uncrossing of face-homed demands.

Implements the crossing predicate, the uncrossing operation, the per-face
extreme-index selection of crossed bilateral pairs (white edges, selected
pairs, red demands, splitting chord) and the simultaneous plan for all
faces of one recursion level.
"""

import logging
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .config import (
    ERROR_MESSAGES,
    RESIDUAL_DEMAND_PREFIX,
    STAGED_RED_PREFIX,
    WHITE_DEMAND_PREFIX,
)
from .models import (
    Demand,
    FaceTerminals,
    FaceUncrossPlan,
    LevelPlan,
    Pair,
    PlanarInstance,
    PlanLink,
    RedDemand,
    SelectedPair,
    SelectionStep,
    WhiteEdge,
    pair_key,
)
from .planar import double, face_terminals, fresh_identifier, insert_zero_chord

logger = logging.getLogger(__name__)


class UncrossingError(ValueError):
    """Custom exception for uncrossing and selection errors."""
    pass


def crossed(terms: FaceTerminals, d1: Pair, d2: Pair) -> bool:
    """
    Whether two demands strictly interleave along the face boundary.

    Args:
        terms: Terminal order of the face
        d1: Endpoints of the first demand
        d2: Endpoints of the second demand

    Returns:
        True iff exactly one endpoint of ``d2`` lies strictly between the
        endpoints of ``d1``; demands sharing an endpoint never cross

    Raises:
        UncrossingError: If an endpoint is not a terminal of the face
    """
    for vertex in (*d1, *d2):
        if vertex not in terms.terminals:
            raise UncrossingError(
                ERROR_MESSAGES["not_on_face"].format(vertex=vertex, face=terms.face_id)
            )
    if set(d1) & set(d2):
        return False
    low, high = sorted((terms.index(d1[0]), terms.index(d1[1])))
    inside = [low < terms.index(v) < high for v in d2]
    return inside[0] != inside[1]


def _shift_request(
    demands: List[Demand], face_id: str, endpoints: Pair, delta: int, taken: Set[str]
) -> List[Demand]:
    """Add ``delta`` units to a face's demands on one endpoint pair.

    Decreases are taken from the pair's demands in identifier order and
    emptied demands are dropped. Increases go to the first demand on the
    pair, or to a new demand when the face has none.
    """
    key = pair_key(*endpoints)
    matching = sorted(
        (d for d in demands if d.home_face == face_id and d.pair == key),
        key=lambda d: d.demand_id,
    )
    if delta > 0:
        if matching:
            target = matching[0]
            return [
                d.model_copy(update={"request": d.request + delta}) if d is target else d
                for d in demands
            ]
        ident = fresh_identifier(taken, f"{key[0]}-{key[1]}@{face_id}")
        taken.add(ident)
        return demands + [
            Demand(demand_id=ident, s=endpoints[0], t=endpoints[1], request=delta, home_face=face_id)
        ]

    remaining = -delta
    updated: Dict[str, int] = {}
    for demand in matching:
        take = min(remaining, demand.request)
        updated[demand.demand_id] = demand.request - take
        remaining -= take
        if remaining == 0:
            break
    result = []
    for demand in demands:
        if demand.home_face == face_id and demand.demand_id in updated:
            if updated[demand.demand_id] > 0:
                result.append(demand.model_copy(update={"request": updated[demand.demand_id]}))
        else:
            result.append(demand)
    return result


def _apply_uncross(
    inst: PlanarInstance, face_id: str, d1: Pair, d2: Pair, units: int
) -> PlanarInstance:
    (s1, t1), (s2, t2) = d1, d2
    taken = {d.demand_id for d in inst.demands}
    demands = list(inst.demands)
    demands = _shift_request(demands, face_id, d1, -units, taken)
    demands = _shift_request(demands, face_id, d2, -units, taken)
    demands = _shift_request(demands, face_id, (s1, s2), units, taken)
    demands = _shift_request(demands, face_id, (t1, t2), units, taken)
    return inst.with_demands(demands)


def _common_face(inst: PlanarInstance, d1: Pair, d2: Pair, face_id: Optional[str]) -> str:
    candidates = [
        f.face_id
        for f in sorted(inst.faces, key=lambda f: f.face_id)
        if {pair_key(*d1), pair_key(*d2)} <= set(inst.aggregated_requests(f.face_id))
    ]
    if face_id is not None:
        candidates = [fid for fid in candidates if fid == face_id]
    if not candidates:
        raise UncrossingError(ERROR_MESSAGES["no_common_face"].format(d1=d1, d2=d2))
    return candidates[0]


def uncross(
    inst: PlanarInstance, d1: Pair, d2: Pair, face_id: Optional[str] = None
) -> PlanarInstance:
    """
    Uncross two crossed demands of a face.

    With ``m = min(r(d1), r(d2))`` both demands lose ``m`` units and the
    re-pairings ``(s1, s2)`` and ``(t1, t2)`` gain ``m`` units each.
    Swapping the labels of ``d2`` selects the other non-crossing re-pairing.

    Args:
        inst: Instance
        d1: (s1, t1)
        d2: (s2, t2)
        face_id: Face carrying both demands (first common face if omitted)

    Returns:
        The uncrossed instance

    Raises:
        UncrossingError: If no face carries both demands or they do not cross
    """
    face = _common_face(inst, d1, d2, face_id)
    terms = face_terminals(inst, face)
    if not crossed(terms, d1, d2):
        raise UncrossingError(ERROR_MESSAGES["not_crossed"].format(d1=d1, d2=d2, face=face))

    requests = inst.aggregated_requests(face)
    units = min(requests[pair_key(*d1)], requests[pair_key(*d2)])
    logger.debug(f"Uncrossing {d1} and {d2} on {face} by {units}")
    return _apply_uncross(inst, face, d1, d2, units)


def select_pairs(inst: PlanarInstance, face_id: str) -> FaceUncrossPlan:
    """
    Select crossed bilateral pairs of a face by the extreme-index rule.

    Each iteration takes i, the smallest left index of a bilateral edge, j
    the largest right index among edges leaving u_i, j' the largest right
    index overall and i' the smallest left index among edges reaching
    u_j'. Equal edges become a solo white edge; otherwise the two edges are
    uncrossed by the smaller of their remaining requests.

    Args:
        inst: Instance
        face_id: Face to plan

    Returns:
        FaceUncrossPlan with pairs, white edges, red demands and chord

    Raises:
        UncrossingError: If the face does not exist or has no terminals
    """
    if not inst.has_face(face_id):
        raise UncrossingError(ERROR_MESSAGES["face_not_found"].format(face=face_id))
    terms = face_terminals(inst, face_id)
    if terms.m == 0:
        raise UncrossingError(ERROR_MESSAGES["no_terminals"].format(face=face_id))

    u = terms.terminal
    k = terms.k
    working: Dict[Tuple[int, int], int] = {}
    for (a, b), request in inst.aggregated_requests(face_id).items():
        i, j = sorted((terms.index(a), terms.index(b)))
        if i <= k < j:
            working[(i, j)] = request

    pairs: List[SelectedPair] = []
    steps: List[SelectionStep] = []
    whites: Dict[Tuple[Tuple[int, int], str], int] = {}
    reds: Dict[Tuple[int, int], int] = {}

    while working:
        i = min(left for left, _ in working)
        j = max(right for left, right in working if left == i)
        j2 = max(right for _, right in working)
        i2 = min(left for left, right in working if right == j2)

        if (i, j) == (i2, j2):
            weight = working.pop((i, j))
            steps.append(SelectionStep(i=i, j=j, i2=i2, j2=j2, multiplicity=weight, solo=True))
            whites[((i, j), "solo")] = whites.get(((i, j), "solo"), 0) + weight
            continue

        m = min(working[(i, j)], working[(i2, j2)])
        pairs.append(SelectedPair(
            first=(u(i), u(j)), second=(u(i2), u(j2)), multiplicity=m, indices=(i, j, i2, j2),
        ))
        steps.append(SelectionStep(i=i, j=j, i2=i2, j2=j2, multiplicity=m, solo=False))
        whites[((i, j2), "paired")] = whites.get(((i, j2), "paired"), 0) + m
        reds[(i, i2)] = reds.get((i, i2), 0) + m
        reds[(j, j2)] = reds.get((j, j2), 0) + m
        for edge in ((i, j), (i2, j2)):
            working[edge] -= m
            if working[edge] == 0:
                del working[edge]

    plan = FaceUncrossPlan(
        face_id=face_id,
        terminals=terms,
        pairs=pairs,
        white=[
            WhiteEdge(endpoints=(u(a), u(b)), weight=w, origin=origin)  # type: ignore[arg-type]
            for ((a, b), origin), w in whites.items()
        ],
        red=[RedDemand(endpoints=(u(a), u(b)), request=r) for (a, b), r in sorted(reds.items())],
        chord=(u(k), u(terms.m)),
        steps=steps,
    )
    logger.info(
        f"Face {face_id}: {len(pairs)} selected pairs, {len(plan.white)} white edges, "
        f"{len(plan.red)} red demands"
    )
    return plan


def white_crossings(plan: FaceUncrossPlan) -> List[Tuple[Pair, Pair]]:
    """Pairs of white edges of a plan that cross each other."""
    found = []
    for index, first in enumerate(plan.white):
        for second in plan.white[index + 1 :]:
            if crossed(plan.terminals, first.endpoints, second.endpoints):
                found.append((first.endpoints, second.endpoints))
    return found


def level_resolutions(
    inst: PlanarInstance, face_id: str
) -> Tuple[PlanarInstance, PlanarInstance]:
    """
    Apply every selected pair of a face under both labelings.

    The first instance re-pairs each selected pair as (u_i, u_j'),
    (u_j, u_i') and so contains the white edges; the second re-pairs it as
    (u_i, u_i'), (u_j, u_j') and so contains the red demands.

    Args:
        inst: Instance
        face_id: Face to resolve

    Returns:
        (instance with white re-pairings, instance with red re-pairings)
    """
    plan = select_pairs(inst, face_id)
    white_side, red_side = inst, inst
    for selected in plan.pairs:
        (ui, uj), (ui2, uj2) = selected.first, selected.second
        white_side = _apply_uncross(
            white_side, face_id, (ui, uj), (uj2, ui2), selected.multiplicity
        )
        red_side = _apply_uncross(
            red_side, face_id, (ui, uj), (ui2, uj2), selected.multiplicity
        )
    return white_side, red_side


def _group_key(demand: Demand) -> Tuple[str, Pair]:
    return demand.home_face, demand.pair


def plan_level(inst: PlanarInstance) -> LevelPlan:
    """
    Plan one recursion level for every face with at least two demands.

    Args:
        inst: Valid instance satisfying the cut condition

    Returns:
        LevelPlan with the doubled white instance, the residual instance
        (chords inserted, demands merged per face and endpoint pair) and the
        links needed to compose walks back onto ``inst``'s demands

    Raises:
        UncrossingError: Propagated from select_pairs
        ChordError: Propagated from insert_zero_chord
    """
    plans: Dict[str, FaceUncrossPlan] = {}
    for face in sorted(inst.faces, key=lambda f: f.face_id):
        if len(inst.aggregated_requests(face.face_id)) >= 2:
            plans[face.face_id] = select_pairs(inst, face.face_id)

    white_demands: List[Demand] = []
    white_links: List[PlanLink] = []
    for face_id, plan in plans.items():
        weights: Dict[Pair, int] = {}
        for white in plan.white:
            key = pair_key(*white.endpoints)
            weights[key] = weights.get(key, 0) + white.weight
        for key, weight in weights.items():
            ident = f"{WHITE_DEMAND_PREFIX}{len(white_demands):03d}"
            white_demands.append(Demand(
                demand_id=ident, s=key[0], t=key[1], request=weight, home_face=face_id
            ))
            white_links.append(PlanLink(face_id=face_id, endpoints=key, demand_id=ident))
    white_instance = double(inst.with_demands(white_demands))

    staged: List[Demand] = [
        d for d in inst.demands
        if d.home_face not in plans or not plans[d.home_face].terminals.is_bilateral(d.s, d.t)
    ]
    taken = {d.demand_id for d in inst.demands}
    red_origin: Dict[str, Tuple[str, Pair]] = {}
    for face_id, plan in plans.items():
        for red in plan.red:
            key = pair_key(*red.endpoints)
            ident = fresh_identifier(taken, f"{STAGED_RED_PREFIX}{face_id}:{key[0]}:{key[1]}")
            taken.add(ident)
            staged.append(Demand(
                demand_id=ident, s=red.endpoints[0], t=red.endpoints[1],
                request=red.request, home_face=face_id,
            ))
            red_origin[ident] = (face_id, key)

    residual = inst.with_demands(staged)
    for face_id, plan in plans.items():
        residual = insert_zero_chord(residual, face_id, *plan.chord)

    groups: Dict[Tuple[str, Pair], List[Demand]] = {}
    for demand in residual.demands:
        groups.setdefault(_group_key(demand), []).append(demand)

    merged: List[Demand] = []
    kept: Dict[str, str] = {}
    red_links: List[PlanLink] = []
    for index, (face_id, key) in enumerate(sorted(groups)):
        ident = f"{RESIDUAL_DEMAND_PREFIX}{index:03d}"
        members = groups[(face_id, key)]
        merged.append(Demand(
            demand_id=ident, s=key[0], t=key[1],
            request=sum(d.request for d in members), home_face=face_id,
        ))
        for member in members:
            if member.demand_id in red_origin:
                origin_face, origin_key = red_origin[member.demand_id]
                red_links.append(PlanLink(face_id=origin_face, endpoints=origin_key, demand_id=ident))
            else:
                kept[member.demand_id] = ident

    logger.info(
        f"Level plan: {len(plans)} faces, {len(white_demands)} white demands, "
        f"{len(merged)} residual demands"
    )
    return LevelPlan(
        plans=plans,
        white_instance=white_instance,
        residual_instance=residual.with_demands(merged),
        white_links=white_links,
        red_links=red_links,
        kept=kept,
    )


def non_crossing_subset(inst: PlanarInstance, order: Optional[Sequence[str]] = None) -> PlanarInstance:
    """Greedily keep demands (by id) that cross no kept demand of their face."""
    kept: List[Demand] = []
    ids = order or sorted(d.demand_id for d in inst.demands)
    for ident in ids:
        demand = inst.demand(ident)
        terms = face_terminals(inst, demand.home_face)
        if all(
            other.home_face != demand.home_face or not crossed(terms, other.pair, demand.pair)
            for other in kept
        ):
            kept.append(demand)
    return inst.with_demands(kept)
