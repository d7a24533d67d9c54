"""
Congestion-bounded routing of face-homed demands.

Each recursion level uncrosses the bilateral demands of every face at once,
routes the resulting non-crossing white demands on doubled capacities,
recurses on the residual red demands of the halved faces, and glues the
white and red walks back into walks for the level's own demands.
"""

import logging
from collections import deque
from typing import Deque, Dict, List

from .config import ERROR_MESSAGES
from .cuts import check_cut_condition
from .models import (
    CutWitness,
    DriverResult,
    LevelAudit,
    LevelPlan,
    Pair,
    PlanarInstance,
    Walk,
    pair_key,
)
from .planar import face_terminals, validate
from .router import (
    build_routing,
    half_integral_routing,
    is_planar_union,
    loop_erase,
    route_integer_multiflow,
    verify_routing,
)
from .uncrossing import plan_level

logger = logging.getLogger(__name__)


class CongestionError(ValueError):
    """Base class for driver failures."""
    pass


class InvalidInstanceError(CongestionError):
    """The input instance fails structural validation."""
    pass


class CutConditionViolated(CongestionError):
    """The input violates the cut condition; carries the witness cut."""

    def __init__(self, witness: CutWitness):
        super().__init__(ERROR_MESSAGES["cut_violated"].format(
            side=" ".join(witness.side),
            capacity=witness.capacity_across,
            request=witness.request_across,
        ))
        self.witness = witness


class BoundViolation(CongestionError):
    """The composed routing exceeds the congestion bound."""
    pass


class RecursionDepthExceeded(CongestionError):
    """The recursion went deeper than the level limit."""
    pass


def theorem_bound(k: int) -> int:
    """
    Congestion bound 2 * ceil(log2 k) + 2.

    Args:
        k: Maximum number of terminals on a face

    Returns:
        The bound

    Raises:
        CongestionError: If k < 1
    """
    if k < 1:
        raise CongestionError(ERROR_MESSAGES["k_positive"].format(k=k))
    return 2 * (k - 1).bit_length() + 2


def max_terminals_per_face(inst: PlanarInstance) -> int:
    """Largest number of demand endpoints on a single face."""
    return max((face_terminals(inst, f.face_id).m for f in inst.faces), default=0)


def _orient(walk: Walk, start: str) -> Walk:
    return walk if walk[0] == start else tuple(reversed(walk))


class _Recursion:
    """Level-by-level state of one driver run."""

    def __init__(self, max_levels: int):
        self.max_levels = max_levels
        self.deepest = 0
        self.audits: List[LevelAudit] = []

    def solve(self, inst: PlanarInstance, level: int) -> Dict[str, List[Walk]]:
        if level > self.max_levels:
            logger.error(f"Recursion reached level {level}")
            raise RecursionDepthExceeded(
                ERROR_MESSAGES["depth_exceeded"].format(level=level, limit=self.max_levels)
            )
        if not inst.demands:
            return {}
        self.deepest = max(self.deepest, level)

        if is_planar_union(inst):
            logger.info(f"Level {level}: non-crossing, routing {len(inst.demands)} demands doubled")
            routing = half_integral_routing(inst)
            if routing is None:
                raise CongestionError(
                    ERROR_MESSAGES["level_unroutable"].format(level=level, phase="base")
                )
            return {
                d.demand_id: routing.assignments[d.demand_id][: d.request] for d in inst.demands
            }

        plan = plan_level(inst)
        white = route_integer_multiflow(plan.white_instance)
        if white is None:
            raise CongestionError(
                ERROR_MESSAGES["level_unroutable"].format(level=level, phase="white")
            )
        self.audits.append(LevelAudit(
            level=level,
            faces_processed=sorted(plan.plans),
            pairs=sum(len(p.pairs) for p in plan.plans.values()),
            white_loads={eid: load for eid, load in sorted(white.loads.items()) if load > 0},
        ))
        logger.info(
            f"Level {level}: {len(plan.plans)} faces uncrossed, "
            f"{len(plan.residual_instance.demands)} residual demands"
        )

        red = self.solve(plan.residual_instance, level + 1)
        return compose(inst, plan, white.assignments, red)


def compose(
    inst: PlanarInstance,
    plan: LevelPlan,
    white: Dict[str, List[Walk]],
    red: Dict[str, List[Walk]],
) -> Dict[str, List[Walk]]:
    """
    Glue white-phase and red-phase walks into walks for ``inst``'s demands.

    Demands kept unchanged in the residual instance draw first from their
    residual demand's walks. Every unit of a selected pair (u_i u_j, u_i'
    u_j') consumes two white walks u_i -> u_j'; u_i u_j continues along a
    red walk u_j' -> u_j and u_i' u_j' starts with a red walk u_i' -> u_i.
    Solo white edges keep one white walk per unit.

    Args:
        inst: Instance the plan was made for
        plan: Level plan of ``inst``
        white: Walks of the doubled white instance, per white demand id
        red: Walks of the residual instance, per residual demand id

    Returns:
        Walks per demand id of ``inst``, oriented from each demand's ``s``
    """
    pools: Dict[str, Deque[Walk]] = {did: deque(walks) for did, walks in red.items()}
    white_pools: Dict[str, Deque[Walk]] = {did: deque(walks) for did, walks in white.items()}
    white_of = {(link.face_id, link.endpoints): link.demand_id for link in plan.white_links}
    red_of = {(link.face_id, link.endpoints): link.demand_id for link in plan.red_links}

    result: Dict[str, List[Walk]] = {}
    for demand in sorted(inst.demands, key=lambda d: d.demand_id):
        target = plan.kept.get(demand.demand_id)
        if target is None:
            continue
        pool = pools[target]
        result[demand.demand_id] = [_orient(pool.popleft(), demand.s) for _ in range(demand.request)]

    def take_red(face_id: str, start: str, end: str) -> Walk:
        return _orient(pools[red_of[(face_id, pair_key(start, end))]].popleft(), start)

    for face_id, face_plan in sorted(plan.plans.items()):
        composed: Dict[Pair, Deque[Walk]] = {}
        for selected in face_plan.pairs:
            (ui, uj), (ui2, uj2) = selected.first, selected.second
            whites = white_pools[white_of[(face_id, pair_key(ui, uj2))]]
            for _ in range(selected.multiplicity):
                w1, w2 = _orient(whites.popleft(), ui), _orient(whites.popleft(), ui)
                ra = take_red(face_id, uj2, uj)
                rb = take_red(face_id, ui2, ui)
                composed.setdefault(pair_key(ui, uj), deque()).append(loop_erase(w1 + ra[1:]))
                composed.setdefault(pair_key(ui2, uj2), deque()).append(loop_erase(rb + w2[1:]))

        for edge in face_plan.white:
            if edge.origin != "solo":
                continue
            whites = white_pools[white_of[(face_id, pair_key(*edge.endpoints))]]
            walks = composed.setdefault(pair_key(*edge.endpoints), deque())
            walks.extend(whites.popleft() for _ in range(edge.weight))

        for demand in inst.demands_on(face_id):
            if demand.demand_id in result:
                continue
            walks = composed[demand.pair]
            result[demand.demand_id] = [
                _orient(walks.popleft(), demand.s) for _ in range(demand.request)
            ]
    return result


def route_with_bound(inst: PlanarInstance) -> DriverResult:
    """
    Route every demand with congestion at most 2 * ceil(log2 k) + 2.

    Args:
        inst: Valid instance satisfying the cut condition

    Returns:
        DriverResult for the original demands

    Raises:
        InvalidInstanceError: If validation fails
        CutConditionViolated: If some cut is over-subscribed
        BoundViolation: If the composed routing breaks the bound
        RecursionDepthExceeded: If more than ceil(log2 k) + 1 levels are used
        RouterBudgetExceeded: Propagated from the router
    """
    report = validate(inst)
    if not report.ok:
        raise InvalidInstanceError(ERROR_MESSAGES["invalid_instance"].format(
            violations=", ".join(sorted(set(report.kinds())))))

    witness = check_cut_condition(inst)
    if witness is not None:
        logger.error(f"Cut condition violated at {witness.side}")
        raise CutConditionViolated(witness)

    k = max_terminals_per_face(inst)
    effective = max(k, 2) if inst.demands else 1
    bound = theorem_bound(effective)
    recursion = _Recursion(max_levels=(effective - 1).bit_length() + 1)

    walks = recursion.solve(inst, 1)
    routing = build_routing(inst, walks)

    violation = verify_routing(inst, routing, bound)
    if violation is not None:
        logger.error(f"Composed routing breaks the bound: {violation.kind} at {violation.element}")
        raise BoundViolation(ERROR_MESSAGES["bound_violated"].format(
            bound=bound, detail=f"{violation.kind} at {violation.element} ({violation.detail})"))

    logger.info(
        f"Routed {len(inst.demands)} demands with congestion {routing.alpha} "
        f"(bound {bound}, k {k}, {recursion.deepest} levels)"
    )
    return DriverResult(
        routing=routing, k=k, bound=bound, levels=recursion.deepest, per_level=recursion.audits
    )

