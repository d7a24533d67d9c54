"""
Exact integer multiflow router for planar-union instances.

Routes demand units one at a time by backtracking over simple paths of the
positive-capacity supply graph, pruned by the slack of every cut, and
verifies routings independently of how they were produced.
"""

import logging
import math
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from .config import ERROR_MESSAGES, get_settings
from .cuts import CutBudgetError, check_cut_condition, crossing_matrix
from .models import Demand, Pair, PlanarInstance, Routing, RoutingViolation, Walk, pair_key
from .planar import double, face_terminals, vertex_degree_sums
from .uncrossing import crossed

logger = logging.getLogger(__name__)


class RouterBudgetExceeded(ValueError):
    """Raised when the search exhausts its node-expansion budget."""
    pass


class RouterContractViolation(ValueError):
    """Raised when a routable instance is reported infeasible."""
    pass


def is_eulerian(inst: PlanarInstance) -> bool:
    """True iff incident capacity plus incident request is even at every vertex."""
    return all(total % 2 == 0 for total in vertex_degree_sums(inst).values())


def is_planar_union(inst: PlanarInstance) -> bool:
    """
    Whether no two demands of a face cross.

    For face-homed demands this is equivalent to planarity of the union of
    the supply and demand graphs.

    Args:
        inst: Instance whose demands are homed on faces

    Returns:
        True iff every face's demand pairs are pairwise non-crossing
    """
    for face in inst.faces:
        pairs = list(inst.aggregated_requests(face.face_id))
        if len(pairs) < 2:
            continue
        terms = face_terminals(inst, face.face_id)
        for index, first in enumerate(pairs):
            for second in pairs[index + 1 :]:
                if crossed(terms, first, second):
                    return False
    return True


def loop_erase(walk: Sequence[str]) -> Walk:
    """Remove cycles from a walk, keeping its endpoints."""
    erased: List[str] = []
    position: Dict[str, int] = {}
    for vertex in walk:
        if vertex in position:
            cut = position[vertex]
            for dropped in erased[cut + 1 :]:
                del position[dropped]
            del erased[cut + 1 :]
        else:
            position[vertex] = len(erased)
            erased.append(vertex)
    return tuple(erased)


def _traversals(walks: Mapping[str, Sequence[Walk]]) -> Dict[Pair, int]:
    counts: Dict[Pair, int] = {}
    for demand_walks in walks.values():
        for walk in demand_walks:
            for a, b in zip(walk, walk[1:]):
                key = pair_key(a, b)
                counts[key] = counts.get(key, 0) + 1
    return counts


def _apportion(total: int, capacities: Sequence[int]) -> List[int]:
    """Largest-remainder split of ``total`` proportional to ``capacities``."""
    whole = sum(capacities)
    if whole == 0:
        return [total] + [0] * (len(capacities) - 1)
    shares = [total * c // whole for c in capacities]
    remainders = sorted(
        range(len(capacities)), key=lambda i: (-(total * capacities[i] % whole), i)
    )
    for i in remainders[: total - sum(shares)]:
        shares[i] += 1
    return shares


def build_routing(inst: PlanarInstance, assignments: Mapping[str, Sequence[Walk]]) -> Routing:
    """
    Compute per-edge loads and congestion for a set of walks.

    Parallel edges share the traversals of their endpoint pair in proportion
    to capacity.

    Args:
        inst: Instance the walks live in
        assignments: Walks per demand id

    Returns:
        Routing with loads for every edge and alpha (None when a
        zero-capacity edge is loaded)
    """
    loads = {e.edge_id: 0 for e in inst.edges}
    for pair, load in _traversals(assignments).items():
        group = inst.edges_by_pair().get(pair, [])
        if not group:
            continue
        for edge, share in zip(group, _apportion(load, [e.capacity for e in group])):
            loads[edge.edge_id] += share

    alpha: Optional[int] = 0
    for edge in inst.edges:
        load = loads[edge.edge_id]
        if load == 0:
            continue
        if edge.capacity == 0:
            alpha = None
            break
        alpha = max(alpha, math.ceil(load / edge.capacity))

    return Routing(
        assignments={did: [tuple(w) for w in walks] for did, walks in assignments.items()},
        loads=loads,
        alpha=alpha,
    )


class _PathList:
    """Simple paths of one demand, generated lazily in canonical order."""

    def __init__(self, graph: nx.Graph, slot: Mapping[Pair, int], s: str, t: str):
        self.slot = slot
        self.items: List[Tuple[Walk, List[int]]] = []
        self._source = self._canonical(graph, s, t)

    @staticmethod
    def _canonical(graph: nx.Graph, s: str, t: str) -> Iterator[Walk]:
        # shortest_simple_paths yields by edge count; each length is re-sorted
        group: List[Walk] = []
        try:
            for path in nx.shortest_simple_paths(graph, s, t):
                if group and len(path) != len(group[0]):
                    yield from sorted(group)
                    group = []
                group.append(tuple(path))
        except (nx.NetworkXNoPath, nx.NodeNotFound):
            pass
        yield from sorted(group)

    def get(self, choice: int) -> Optional[Tuple[Walk, List[int]]]:
        """The ``choice``-th path with its edge slots, or None past the last one."""
        while len(self.items) <= choice:
            path = next(self._source, None)
            if path is None:
                return None
            self.items.append((path, [self.slot[pair_key(a, b)] for a, b in zip(path, path[1:])]))
        return self.items[choice]


class _CutTable:
    """Crossing matrices of supply pairs and demands over every nontrivial cut."""

    def __init__(self, order: Sequence[str], pairs: Sequence[Pair], demands: Sequence[Demand]):
        self.supply = crossing_matrix(order, pairs)
        self.demand = crossing_matrix(order, [d.pair for d in demands])

    def slack(self, capacity: Sequence[int], requests: Sequence[int]) -> np.ndarray:
        """Capacity minus request across every cut."""
        return (
            self.supply @ np.asarray(capacity, dtype=np.int64)
            - self.demand @ np.asarray(requests, dtype=np.int64)
        )

    def after(self, slack: np.ndarray, demand: int, slots: Sequence[int]) -> np.ndarray:
        """Slack once one unit of ``demand`` is routed over ``slots``."""
        return slack + self.demand[:, demand] - self.supply[:, list(slots)].sum(axis=1)


class MultiflowSearch:
    """
    Backtracking search for an integer routing within capacities.

    Units are ordered by demand id; candidate paths per demand are the
    simple paths of the positive-capacity graph, shortest first and then
    lexicographic, produced only as far as the search reads them.
    Consecutive units of one demand take non-decreasing path indices.

    The slack of every cut is carried along the search and a path is only
    taken if no slack turns negative. For an Eulerian planar-union instance
    each residual is again Eulerian and planar-union, so it routes exactly
    when its slacks are nonnegative and the search never backtracks. Above
    ``router_cut_table_limit`` vertices only single-vertex cuts and
    connectivity are checked.
    """

    def __init__(self, inst: PlanarInstance, budget: int):
        settings = get_settings()
        self.inst = inst
        self.budget = budget
        self.expansions = 0
        self.memo_limit = settings.router_memo_limit

        capacities = {p: c for p, c in inst.pair_capacities().items() if c > 0}
        self.pairs: List[Pair] = sorted(capacities)
        self.slot = {pair: index for index, pair in enumerate(self.pairs)}
        self.capacity = [capacities[p] for p in self.pairs]

        graph = nx.Graph()
        graph.add_nodes_from(inst.vertices)
        graph.add_edges_from(self.pairs)
        self.graph = graph

        self.demands: List[Demand] = sorted(inst.demands, key=lambda d: d.demand_id)
        self.units: List[int] = [
            index for index, d in enumerate(self.demands) for _ in range(d.request)
        ]
        self.paths = [_PathList(graph, self.slot, d.s, d.t) for d in self.demands]
        self.failed: Set[Tuple[int, int, Tuple[int, ...]]] = set()

        order = sorted(
            set(inst.vertices)
            | {v for pair in self.pairs for v in pair}
            | {v for d in self.demands for v in d.pair}
        )
        self.cuts: Optional[_CutTable] = None
        if 2 <= len(order) <= settings.router_cut_table_limit:
            self.cuts = _CutTable(order, self.pairs, self.demands)

    def _feasible(self, position: int, residual: List[int]) -> bool:
        """Single-vertex cuts and residual connectivity for the remaining units."""
        pending: Dict[str, int] = {}
        remaining: Set[int] = set()
        for index in self.units[position:]:
            demand = self.demands[index]
            remaining.add(index)
            pending[demand.s] = pending.get(demand.s, 0) + 1
            pending[demand.t] = pending.get(demand.t, 0) + 1
        if not remaining:
            return True

        incident: Dict[str, int] = {}
        parent: Dict[str, str] = {}

        def find(v: str) -> str:
            while parent.get(v, v) != v:
                parent[v] = parent.get(parent[v], parent[v])
                v = parent[v]
            return v

        for slot, left in enumerate(residual):
            if left <= 0:
                continue
            a, b = self.pairs[slot]
            incident[a] = incident.get(a, 0) + left
            incident[b] = incident.get(b, 0) + left
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        if any(incident.get(v, 0) < count for v, count in pending.items()):
            return False
        return all(find(self.demands[i].s) == find(self.demands[i].t) for i in remaining)

    def _admit(
        self, position: int, index: int, slots: Sequence[int], residual: List[int],
        slack: Optional[np.ndarray],
    ) -> Tuple[bool, Optional[np.ndarray]]:
        """Whether the state after routing one unit of ``index`` can still complete."""
        if self.cuts is None or slack is None:
            return self._feasible(position, residual), None
        trial = self.cuts.after(slack, index, slots)
        return trial.size == 0 or int(trial.min()) >= 0, trial

    def _place(
        self, position: int, start: int, residual: List[int],
        slack: Optional[np.ndarray], chosen: List[Walk],
    ) -> bool:
        if position == len(self.units):
            return True
        key = (position, start, tuple(residual))
        if key in self.failed:
            return False

        self.expansions += 1
        if self.expansions > self.budget:
            raise RouterBudgetExceeded(
                ERROR_MESSAGES["router_budget"].format(expansions=self.budget)
            )

        index = self.units[position]
        following = position + 1
        same_demand = following < len(self.units) and self.units[following] == index
        choice = start
        while True:
            candidate = self.paths[index].get(choice)
            if candidate is None:
                break
            walk, slots = candidate
            if all(residual[s] > 0 for s in slots):
                for s in slots:
                    residual[s] -= 1
                admitted, trial = self._admit(following, index, slots, residual, slack)
                if admitted:
                    chosen.append(walk)
                    if self._place(following, choice if same_demand else 0, residual, trial, chosen):
                        return True
                    chosen.pop()
                for s in slots:
                    residual[s] += 1
            choice += 1

        if len(self.failed) < self.memo_limit:
            self.failed.add(key)
        return False

    def run(self) -> Optional[Dict[str, List[Walk]]]:
        """Search for a routing; None when the search proves there is none."""
        residual = list(self.capacity)
        slack: Optional[np.ndarray] = None
        if self.cuts is not None:
            slack = self.cuts.slack(self.capacity, [d.request for d in self.demands])
            if slack.size and int(slack.min()) < 0:
                return None
        elif not self._feasible(0, residual):
            return None

        chosen: List[Walk] = []
        if not self._place(0, 0, residual, slack, chosen):
            return None
        assignments: Dict[str, List[Walk]] = {d.demand_id: [] for d in self.demands}
        for index, walk in zip(self.units, chosen):
            assignments[self.demands[index].demand_id].append(loop_erase(walk))
        return assignments


def route_integer_multiflow(inst: PlanarInstance, budget: Optional[int] = None) -> Optional[Routing]:
    """
    Find an integer routing with load(e) <= c(e) on every edge.

    Args:
        inst: Instance to route
        budget: Node-expansion limit (defaults to the configured router budget)

    Returns:
        Routing with alpha <= 1, or None when no integer routing exists

    Raises:
        RouterBudgetExceeded: If the search is abandoned
        RouterContractViolation: If an Eulerian planar-union instance that
            satisfies the cut condition is found to be infeasible
    """
    budget = get_settings().router_budget if budget is None else budget
    search = MultiflowSearch(inst, budget)
    logger.debug(
        f"Routing {len(search.units)} units over {len(search.pairs)} edge pairs "
        f"(budget {budget})"
    )
    assignments = search.run()

    if assignments is not None:
        logger.info(f"Routed {len(search.units)} units in {search.expansions} expansions")
        return build_routing(inst, assignments)

    if is_planar_union(inst) and is_eulerian(inst):
        try:
            witness = check_cut_condition(inst)
        except CutBudgetError as e:
            logger.warning(f"Skipping contract check: {e}")
            witness = None
        else:
            if witness is None:
                logger.error("Search found no routing for a routable instance")
                raise RouterContractViolation(
                    ERROR_MESSAGES["router_contract"].format(units=len(search.units))
                )
    logger.info(f"No integer routing ({search.expansions} expansions)")
    return None


def half_integral_routing(inst: PlanarInstance, budget: Optional[int] = None) -> Optional[Routing]:
    """Integer routing of the doubled instance, i.e. a half-integral routing of ``inst``."""
    return route_integer_multiflow(double(inst), budget)


def verify_routing(inst: PlanarInstance, routing: Routing, alpha: int) -> Optional[RoutingViolation]:
    """
    Check a routing against an instance at congestion ``alpha``.

    Loads are recomputed from the walks per endpoint pair. Stored per-edge
    loads, when present, must add up to those counts and respect the bound
    edge by edge.

    Args:
        inst: Instance the routing claims to satisfy
        routing: Routing to check
        alpha: Allowed congestion

    Returns:
        None when the routing is valid, otherwise the first violation found
    """
    demands = {d.demand_id: d for d in inst.demands}
    for did in sorted(routing.assignments):
        if did not in demands:
            return RoutingViolation(kind="unknown_demand", element=did)

    for did, demand in sorted(demands.items()):
        walks = routing.assignments.get(did, [])
        if len(walks) != demand.request:
            return RoutingViolation(
                kind="demand_count", element=did,
                detail=f"{len(walks)} walks for request {demand.request}",
            )

    capacities = inst.pair_capacities()
    for did, demand in sorted(demands.items()):
        for walk in routing.assignments[did]:
            ends = {walk[0], walk[-1]} if walk else set()
            if len(walk) < 2 or ends != {demand.s, demand.t}:
                return RoutingViolation(
                    kind="walk_endpoints", element=did, detail=" ".join(walk)
                )
            for a, b in zip(walk, walk[1:]):
                if pair_key(a, b) not in capacities:
                    return RoutingViolation(kind="not_an_edge", element=did, detail=f"{a}-{b}")

    counted = _traversals(routing.assignments)
    for pair, load in sorted(counted.items()):
        if load and capacities[pair] == 0:
            return RoutingViolation(
                kind="zero_capacity_loaded", element=f"{pair[0]}-{pair[1]}", detail=f"load {load}"
            )
        if load > alpha * capacities[pair]:
            return RoutingViolation(
                kind="capacity_exceeded", element=f"{pair[0]}-{pair[1]}",
                detail=f"load {load} > {alpha} * {capacities[pair]}",
            )

    if routing.loads:
        edges = {e.edge_id: e for e in inst.edges}
        stored: Dict[Pair, int] = {}
        for eid, load in sorted(routing.loads.items()):
            if eid not in edges:
                return RoutingViolation(kind="load_mismatch", element=eid, detail="unknown edge")
            edge = edges[eid]
            if load and edge.capacity == 0:
                return RoutingViolation(kind="zero_capacity_loaded", element=eid, detail=f"load {load}")
            if load > alpha * edge.capacity:
                return RoutingViolation(
                    kind="capacity_exceeded", element=eid,
                    detail=f"load {load} > {alpha} * {edge.capacity}",
                )
            stored[edge.pair] = stored.get(edge.pair, 0) + load
        for pair in sorted(set(stored) | set(counted)):
            if stored.get(pair, 0) != counted.get(pair, 0):
                return RoutingViolation(
                    kind="load_mismatch", element=f"{pair[0]}-{pair[1]}",
                    detail=f"stored {stored.get(pair, 0)}, walks {counted.get(pair, 0)}",
                )
    return None

