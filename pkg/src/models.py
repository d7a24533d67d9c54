"""
Pydantic models for the planar congestion router.

This module defines the data models used throughout the application:
embedded supply/demand instances, per-face uncrossing plans, routings,
driver results and counting-bound reports.
"""

from typing import Dict, Iterable, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Pair = Tuple[str, str]
Walk = Tuple[str, ...]


def pair_key(a: str, b: str) -> Pair:
    """Canonical unordered key for a vertex pair."""
    return (a, b) if a <= b else (b, a)


class SupplyEdge(BaseModel):
    """Supply edge with an integer capacity; parallel edges keep their own ids."""

    model_config = ConfigDict(frozen=True)

    edge_id: str = Field(..., min_length=1, description="Stable edge identifier")
    u: str = Field(..., min_length=1, description="First endpoint")
    v: str = Field(..., min_length=1, description="Second endpoint")
    capacity: int = Field(..., ge=0, description="Nonnegative integer capacity")

    @model_validator(mode="after")
    def validate_endpoints(self) -> "SupplyEdge":
        """Reject loops."""
        if self.u == self.v:
            raise ValueError(f"edge '{self.edge_id}' is a loop at '{self.u}'")
        return self

    @property
    def pair(self) -> Pair:
        return pair_key(self.u, self.v)


class Face(BaseModel):
    """Face of the embedding given by its boundary cycle."""

    model_config = ConfigDict(frozen=True)

    face_id: str = Field(..., min_length=1, description="Face identifier")
    boundary: Tuple[str, ...] = Field(..., min_length=2, description="Cyclic vertex sequence")
    outer: bool = Field(default=False, description="Informational outer-face flag")

    def sides(self) -> List[Pair]:
        """Unordered vertex pairs of consecutive boundary vertices, wrapping around."""
        n = len(self.boundary)
        return [pair_key(self.boundary[i], self.boundary[(i + 1) % n]) for i in range(n)]

    def position(self, vertex: str) -> int:
        return self.boundary.index(vertex)

    def __contains__(self, vertex: object) -> bool:
        return vertex in self.boundary


class Demand(BaseModel):
    """Demand between two vertices of its home face."""

    model_config = ConfigDict(frozen=True)

    demand_id: str = Field(..., min_length=1, description="Demand identifier")
    s: str = Field(..., min_length=1, description="First endpoint")
    t: str = Field(..., min_length=1, description="Second endpoint")
    request: int = Field(..., ge=1, description="Positive integer request")
    home_face: str = Field(..., min_length=1, description="Face the demand lies on")

    @model_validator(mode="after")
    def validate_endpoints(self) -> "Demand":
        """Demand endpoints must be distinct."""
        if self.s == self.t:
            raise ValueError(f"demand '{self.demand_id}' has equal endpoints '{self.s}'")
        return self

    @property
    def pair(self) -> Pair:
        return pair_key(self.s, self.t)


class PlanarInstance(BaseModel):
    """
    Embedded planar multiflow instance.

    Holds the supply graph with capacities, the face list describing the
    embedding and the face-homed demands. Structural invariants (Euler
    relation, two faces per edge, ...) are checked by ``planar.validate``
    rather than at construction so that invalid documents can be reported.
    """

    model_config = ConfigDict(frozen=True)

    vertices: Tuple[str, ...] = Field(default=(), description="Vertex identifiers")
    edges: Tuple[SupplyEdge, ...] = Field(default=(), description="Supply edges")
    faces: Tuple[Face, ...] = Field(default=(), description="Faces of the embedding")
    demands: Tuple[Demand, ...] = Field(default=(), description="Demands")

    def face(self, face_id: str) -> Face:
        for face in self.faces:
            if face.face_id == face_id:
                return face
        raise KeyError(face_id)

    def has_face(self, face_id: str) -> bool:
        return any(face.face_id == face_id for face in self.faces)

    def edge(self, edge_id: str) -> SupplyEdge:
        for edge in self.edges:
            if edge.edge_id == edge_id:
                return edge
        raise KeyError(edge_id)

    def demand(self, demand_id: str) -> Demand:
        for demand in self.demands:
            if demand.demand_id == demand_id:
                return demand
        raise KeyError(demand_id)

    def demands_on(self, face_id: str) -> List[Demand]:
        """Demands homed on a face, sorted by identifier."""
        return sorted(
            (d for d in self.demands if d.home_face == face_id), key=lambda d: d.demand_id
        )

    def edges_by_pair(self) -> Dict[Pair, List[SupplyEdge]]:
        """Supply edges grouped by endpoint pair, each group sorted by id."""
        groups: Dict[Pair, List[SupplyEdge]] = {}
        for edge in sorted(self.edges, key=lambda e: e.edge_id):
            groups.setdefault(edge.pair, []).append(edge)
        return groups

    def pair_capacities(self) -> Dict[Pair, int]:
        """Total capacity per endpoint pair (parallel edges summed)."""
        totals: Dict[Pair, int] = {}
        for edge in self.edges:
            totals[edge.pair] = totals.get(edge.pair, 0) + edge.capacity
        return totals

    def aggregated_requests(self, face_id: str) -> Dict[Pair, int]:
        """Requests of the demands on a face summed per endpoint pair."""
        totals: Dict[Pair, int] = {}
        for demand in self.demands_on(face_id):
            totals[demand.pair] = totals.get(demand.pair, 0) + demand.request
        return totals

    def with_demands(self, demands: Iterable[Demand]) -> "PlanarInstance":
        """Copy of the instance with a different demand multiset."""
        return self.model_copy(update={"demands": tuple(demands)})

    @property
    def total_request(self) -> int:
        return sum(d.request for d in self.demands)


class FaceTerminals(BaseModel):
    """Demand endpoints of one face in boundary order, split into halves."""

    model_config = ConfigDict(frozen=True)

    face_id: str = Field(..., description="Face identifier")
    terminals: Tuple[str, ...] = Field(default=(), description="u_1 ... u_m in boundary order")

    @property
    def m(self) -> int:
        return len(self.terminals)

    @property
    def k(self) -> int:
        return self.m // 2

    @property
    def r_half(self) -> Tuple[str, ...]:
        return self.terminals[: self.k]

    @property
    def l_half(self) -> Tuple[str, ...]:
        return self.terminals[self.k :]

    def index(self, vertex: str) -> int:
        """1-based index of a terminal."""
        return self.terminals.index(vertex) + 1

    def terminal(self, index: int) -> str:
        return self.terminals[index - 1]

    def is_bilateral(self, a: str, b: str) -> bool:
        """True when one endpoint lies in R and the other in L."""
        return (self.index(a) <= self.k) != (self.index(b) <= self.k)


class Violation(BaseModel):
    """A violated structural invariant."""

    kind: str = Field(..., description="Violation category")
    element: str = Field(..., description="Offending element identifier")
    detail: str = Field(default="", description="Human readable detail")


class ValidationReport(BaseModel):
    """Outcome of validating an instance."""

    violations: List[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> List[str]:
        return [v.kind for v in self.violations]


class CutWitness(BaseModel):
    """Vertex set certifying a cut-condition violation."""

    model_config = ConfigDict(frozen=True)

    side: Tuple[str, ...] = Field(..., min_length=1, description="Vertex set X, sorted")
    capacity_across: int = Field(..., ge=0, description="c(delta_G(X))")
    request_across: int = Field(..., ge=0, description="r(delta_H(X))")
    central: bool = Field(..., description="X and its complement induce connected subgraphs")

    @property
    def deficit(self) -> int:
        return self.request_across - self.capacity_across


class SelectedPair(BaseModel):
    """Crossed bilateral pair u_i u_j, u_i' u_j' uncrossed m times."""

    model_config = ConfigDict(frozen=True)

    first: Pair = Field(..., description="(u_i, u_j)")
    second: Pair = Field(..., description="(u_i', u_j')")
    multiplicity: int = Field(..., ge=1, description="Units uncrossed")
    indices: Tuple[int, int, int, int] = Field(..., description="(i, j, i', j')")

    @field_validator("indices")
    @classmethod
    def validate_indices(cls, v: Tuple[int, int, int, int]) -> Tuple[int, int, int, int]:
        """Selected pairs are strictly crossed: i < i' < j < j'."""
        i, j, i2, j2 = v
        if not (i < i2 < j < j2):
            raise ValueError(f"indices {v} are not strictly crossed")
        return v


class WhiteEdge(BaseModel):
    """Non-crossing demand routed in the doubled white phase."""

    model_config = ConfigDict(frozen=True)

    endpoints: Pair
    weight: int = Field(..., ge=1)
    origin: Literal["paired", "solo"]


class RedDemand(BaseModel):
    """Residual same-side demand produced by uncrossing."""

    model_config = ConfigDict(frozen=True)

    endpoints: Pair
    request: int = Field(..., ge=1)


class SelectionStep(BaseModel):
    """One iteration of the extreme-index selection loop."""

    model_config = ConfigDict(frozen=True)

    i: int
    j: int
    i2: int
    j2: int
    multiplicity: int = Field(..., ge=1)
    solo: bool


class FaceUncrossPlan(BaseModel):
    """Per-face output of the selection procedure."""

    model_config = ConfigDict(frozen=True)

    face_id: str
    terminals: FaceTerminals
    pairs: List[SelectedPair] = Field(default_factory=list)
    white: List[WhiteEdge] = Field(default_factory=list)
    red: List[RedDemand] = Field(default_factory=list)
    chord: Pair = Field(..., description="(u_k, u_m)")
    steps: List[SelectionStep] = Field(default_factory=list)


class PlanLink(BaseModel):
    """Maps a (face, endpoint pair) of a level to a demand of a derived instance."""

    model_config = ConfigDict(frozen=True)

    face_id: str
    endpoints: Pair
    demand_id: str


class LevelPlan(BaseModel):
    """Simultaneous uncrossing of every face with at least two demands."""

    model_config = ConfigDict(frozen=True)

    plans: Dict[str, FaceUncrossPlan] = Field(default_factory=dict)
    white_instance: PlanarInstance
    residual_instance: PlanarInstance
    white_links: List[PlanLink] = Field(default_factory=list)
    red_links: List[PlanLink] = Field(default_factory=list)
    kept: Dict[str, str] = Field(
        default_factory=dict, description="Input demand id -> residual demand id"
    )

    @property
    def is_fixpoint(self) -> bool:
        return not self.plans


class Routing(BaseModel):
    """Integer routing: walks per demand, per-edge loads and congestion."""

    assignments: Dict[str, List[Walk]] = Field(default_factory=dict)
    loads: Dict[str, int] = Field(default_factory=dict)
    alpha: Optional[int] = Field(
        default=0, ge=0, description="None when a zero-capacity edge carries load"
    )

    @property
    def bounded(self) -> bool:
        return self.alpha is not None

    def walk_count(self) -> int:
        return sum(len(walks) for walks in self.assignments.values())


class RoutingViolation(BaseModel):
    """First problem found when checking a routing."""

    kind: str
    element: str
    detail: str = ""


class LevelAudit(BaseModel):
    """White-phase bookkeeping of one recursion level."""

    level: int = Field(..., ge=1)
    faces_processed: List[str] = Field(default_factory=list)
    pairs: int = Field(default=0, ge=0)
    white_loads: Dict[str, int] = Field(default_factory=dict)


class DriverResult(BaseModel):
    """Routing of the original demands together with the bound bookkeeping."""

    routing: Routing
    k: int = Field(..., ge=0, description="Max terminals per face at input")
    bound: int = Field(..., ge=2, description="2*ceil(log2 k) + 2")
    levels: int = Field(..., ge=0)
    per_level: List[LevelAudit] = Field(default_factory=list)

    @property
    def alpha(self) -> Optional[int]:
        return self.routing.alpha


class ChainStep(BaseModel):
    """One inequality of the counting argument, evaluated in log space."""

    name: str
    lhs: float
    rhs: float
    strict: bool = False
    holds: bool


class BoundReport(BaseModel):
    """Counting-bound values and the evaluated inequality chain."""

    n: int = Field(..., ge=1)
    c: int = Field(..., ge=1)
    log_solvable: float
    log_total: float
    verdict: bool = Field(..., description="True when solvable capacity covers all demand graphs")
    chain_steps: List[ChainStep] = Field(default_factory=list)
    catalan: Optional[int] = None
    matching_glue: Optional[int] = None
    total: Optional[int] = None

    @property
    def chain_holds(self) -> bool:
        return all(step.holds for step in self.chain_steps)


class GeneratorParams(BaseModel):
    """Parameters of the planted-feasibility instance generator."""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, lt=2**64, description="64-bit seed")
    vertex_budget: int = Field(default=8, ge=3, le=99, description="Vertices on the outer cycle")
    face_demand_budget: int = Field(default=2, ge=0, description="Max demands per face")
    max_request: int = Field(default=2, ge=1, description="Max request per demand")
    slack: int = Field(default=1, ge=0, description="Added to planted capacities")
