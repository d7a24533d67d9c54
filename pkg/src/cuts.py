"""
Exhaustive cut-condition oracle.

Enumerates the 2^(|V|-1) - 1 nontrivial cuts in numpy blocks: vertex ``i``
of the sorted vertex list is bit ``i`` of the mask, and the last vertex is
pinned outside X so each cut is seen once.
"""

import logging
from typing import Collection, Iterable, List, Literal, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .config import ERROR_MESSAGES, get_settings
from .models import CutWitness, PlanarInstance

logger = logging.getLogger(__name__)

CutMode = Literal["all", "central"]


class CutBudgetError(ValueError):
    """Raised when an instance is too large for exhaustive enumeration."""
    pass


class CutSetError(ValueError):
    """Raised for an empty or full cut side."""
    pass


def _check_side(inst: PlanarInstance, side: Collection[str]) -> set:
    chosen = set(side)
    unknown = chosen - set(inst.vertices)
    if unknown:
        raise CutSetError(ERROR_MESSAGES["cut_set"].format(detail=f"unknown {sorted(unknown)}"))
    if not chosen or len(chosen) >= len(set(inst.vertices)):
        raise CutSetError(ERROR_MESSAGES["cut_set"].format(detail=f"|X| = {len(chosen)}"))
    return chosen


def cut_values(inst: PlanarInstance, side: Collection[str]) -> Tuple[int, int]:
    """
    Capacity and request across the cut delta(X).

    Args:
        inst: Instance
        side: Vertex set X

    Returns:
        (capacity_across, request_across)

    Raises:
        CutSetError: If X is empty, full, or names unknown vertices
    """
    chosen = _check_side(inst, side)
    capacity = sum(e.capacity for e in inst.edges if (e.u in chosen) != (e.v in chosen))
    request = sum(d.request for d in inst.demands if (d.s in chosen) != (d.t in chosen))
    return capacity, request


def supply_graph(inst: PlanarInstance) -> nx.Graph:
    """Simple undirected graph of all supply edges, zero capacity included."""
    graph = nx.Graph()
    graph.add_nodes_from(inst.vertices)
    graph.add_edges_from((e.u, e.v) for e in inst.edges)
    return graph


def is_central(inst: PlanarInstance, side: Collection[str], graph: Optional[nx.Graph] = None) -> bool:
    """True iff X and its complement both induce connected supply subgraphs."""
    chosen = _check_side(inst, side)
    graph = graph if graph is not None else supply_graph(inst)
    rest = set(inst.vertices) - chosen
    return nx.is_connected(graph.subgraph(chosen)) and nx.is_connected(graph.subgraph(rest))


def _normalized(order: Sequence[str], mask: int) -> Tuple[str, ...]:
    """The lexicographically smaller of X and its complement, as a sorted tuple."""
    inside = tuple(v for i, v in enumerate(order) if mask >> i & 1)
    outside = tuple(v for i, v in enumerate(order) if not mask >> i & 1)
    return min(inside, outside)


def _deficit_blocks(inst: PlanarInstance, order: Sequence[str], chunk: int) -> Iterable[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (masks, capacity, request) arrays block by block."""
    index = {v: i for i, v in enumerate(order)}
    cap_terms = [(index[u], index[v], c) for (u, v), c in inst.pair_capacities().items() if c > 0]
    req_terms = [(index[d.s], index[d.t], d.request) for d in inst.demands]
    total = 1 << (len(order) - 1)

    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        capacity = np.zeros(masks.shape, dtype=np.int64)
        request = np.zeros(masks.shape, dtype=np.int64)
        for i, j, c in cap_terms:
            capacity += c * (((masks >> i) ^ (masks >> j)) & 1)
        for i, j, r in req_terms:
            request += r * (((masks >> i) ^ (masks >> j)) & 1)
        yield masks, capacity, request


def _adjacency(inst: PlanarInstance, order: Sequence[str]) -> np.ndarray:
    """Neighbour bit mask of every vertex over all supply edges."""
    index = {v: i for i, v in enumerate(order)}
    adjacency = np.zeros(len(order), dtype=np.int64)
    for edge in inst.edges:
        adjacency[index[edge.u]] |= 1 << index[edge.v]
        adjacency[index[edge.v]] |= 1 << index[edge.u]
    return adjacency


def _connected(sets: np.ndarray, adjacency: np.ndarray) -> np.ndarray:
    """True where the vertex set encoded by each mask induces a connected subgraph."""
    reach = sets & -sets
    while True:
        frontier = np.zeros_like(reach)
        for v, neighbours in enumerate(adjacency):
            frontier |= np.where(((reach >> v) & 1).astype(bool), neighbours, 0)
        grown = reach | (frontier & sets)
        if np.array_equal(grown, reach):
            return grown == sets
        reach = grown


def crossing_matrix(order: Sequence[str], pairs: Sequence[Tuple[str, str]]) -> np.ndarray:
    """
    Incidence of vertex pairs and nontrivial cuts.

    Row ``m`` is the cut whose side X is encoded by mask ``m + 1`` in the
    numbering of this module; entry ``(m, p)`` is 1 iff pair ``p`` has exactly
    one endpoint in X.

    Args:
        order: Vertex order defining the bit of each vertex
        pairs: Vertex pairs (supply edges or demands)

    Returns:
        int8 array of shape (2^(|order|-1) - 1, len(pairs))
    """
    index = {v: i for i, v in enumerate(order)}
    masks = np.arange(1, 1 << max(len(order) - 1, 0), dtype=np.int64)
    matrix = np.zeros((len(masks), len(pairs)), dtype=np.int8)
    for column, (a, b) in enumerate(pairs):
        matrix[:, column] = ((masks >> index[a]) ^ (masks >> index[b])) & 1
    return matrix


def check_cut_condition(
    inst: PlanarInstance, mode: CutMode = "all", limit: Optional[int] = None
) -> Optional[CutWitness]:
    """
    Decide the cut condition exhaustively.

    Every block keeps only the masks reaching the largest deficit seen so
    far; in central mode the connectivity of both sides is tested on those
    masks with bit-mask closures before they are kept.

    Args:
        inst: Instance to check
        mode: "all" scans every cut, "central" only cuts whose two sides
            are connected
        limit: Vertex limit (defaults to the configured enumeration limit)

    Returns:
        None when the condition holds, otherwise the witness with maximal
        deficit, ties broken by the lexicographically smallest X

    Raises:
        CutBudgetError: If the instance has more vertices than the limit
    """
    settings = get_settings()
    limit = settings.cut_enumeration_limit if limit is None else limit
    order = sorted(set(inst.vertices))
    if len(order) > limit:
        raise CutBudgetError(ERROR_MESSAGES["cut_budget"].format(count=len(order), limit=limit))
    if len(order) < 2:
        return None

    adjacency = _adjacency(inst, order) if mode == "central" else None
    full = (1 << len(order)) - 1
    best = 0
    tied: List[int] = []
    for masks, capacity, request in _deficit_blocks(inst, order, settings.cut_chunk_size):
        deficit = request - capacity
        keep = np.nonzero(deficit >= max(best, 1))[0]
        if adjacency is not None and keep.size:
            sides = masks[keep]
            keep = keep[_connected(sides, adjacency) & _connected(full ^ sides, adjacency)]
        if not keep.size:
            continue
        block_best = int(deficit[keep].max())
        if block_best > best:
            best, tied = block_best, []
        tied.extend(int(m) for m in masks[keep[deficit[keep] == block_best]])

    if not tied:
        logger.info(f"Cut condition holds ({mode} cuts, {len(order)} vertices)")
        return None

    side = min(_normalized(order, mask) for mask in tied)
    capacity_across, request_across = cut_values(inst, side)
    central = True if adjacency is not None else is_central(inst, side)
    logger.info(f"Cut condition violated at X={side} (deficit {best})")
    return CutWitness(
        side=side, capacity_across=capacity_across, request_across=request_across, central=central
    )


def satisfies_cut_condition(inst: PlanarInstance, mode: CutMode = "all") -> bool:
    """Convenience wrapper around :func:`check_cut_condition`."""
    return check_cut_condition(inst, mode) is None
