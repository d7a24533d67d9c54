"""
Document loading module for the planar congestion router.

This module parses and serializes the line-oriented instance and routing
formats. Parsing mirrors the document exactly (identifiers preserved,
parallel demands kept apart); structural invariants beyond what a single
line can violate are left to ``planar.validate``.
"""

import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

from pydantic import ValidationError

from .config import (
    COMMENT_CHAR,
    ERROR_MESSAGES,
    INSTANCE_KEYWORDS,
    OUTER_TOKEN,
    ROUTING_KEYWORDS,
    UNBOUNDED_ALPHA_TOKEN,
)
from .models import Demand, Face, PlanarInstance, Routing, SupplyEdge, Walk

logger = logging.getLogger(__name__)


class InstanceFormatError(ValueError):
    """Custom exception for malformed instance documents."""
    pass


class RoutingFormatError(ValueError):
    """Custom exception for malformed routing documents."""
    pass


def _tokens(text: str) -> List[Tuple[int, List[str]]]:
    """Split a document into (line number, tokens), dropping comments and blanks."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split(COMMENT_CHAR, 1)[0].strip()
        if content:
            lines.append((number, content.split()))
    return lines


def _fail(error: type, line: int, detail: str) -> ValueError:
    return error(ERROR_MESSAGES["syntax"].format(line=line, detail=detail))


def _parse_count(token: str, line: int, error: type = InstanceFormatError) -> int:
    if not token.isdigit():
        raise _fail(error, line, ERROR_MESSAGES["not_integer"].format(token=token))
    return int(token)


def parse_instance(text: str) -> PlanarInstance:
    """
    Parse an instance document.

    Args:
        text: Document in the instance format

    Returns:
        PlanarInstance mirroring the document

    Raises:
        InstanceFormatError: On syntax errors, duplicate or unknown
            identifiers, a demand endpoint off its home face, or a face list
            without exactly one outer face
    """
    vertices: List[str] = []
    edges: List[SupplyEdge] = []
    faces: List[Face] = []
    demands: List[Demand] = []
    seen: Dict[str, Set[str]] = {keyword: set() for keyword in INSTANCE_KEYWORDS}
    demand_lines: Dict[str, int] = {}
    references: List[Tuple[str, str, str, int]] = []

    def claim(kind: str, ident: str, line: int) -> None:
        if ident in seen[kind]:
            raise _fail(
                InstanceFormatError, line,
                ERROR_MESSAGES["duplicate_id"].format(kind=kind, ident=ident),
            )
        seen[kind].add(ident)

    def refer(vertex: str, kind: str, ident: str, line: int) -> None:
        references.append((vertex, kind, ident, line))

    for line, tokens in _tokens(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword not in INSTANCE_KEYWORDS:
            raise _fail(
                InstanceFormatError, line,
                ERROR_MESSAGES["unknown_keyword"].format(keyword=keyword),
            )

        try:
            if keyword == "vertex":
                if len(args) != 1:
                    raise _fail(InstanceFormatError, line, ERROR_MESSAGES["arity"].format(
                        keyword=keyword, expected=1, got=len(args)))
                if args[0] == OUTER_TOKEN:
                    raise _fail(InstanceFormatError, line,
                                ERROR_MESSAGES["reserved_vertex"].format(token=args[0]))
                claim("vertex", args[0], line)
                vertices.append(args[0])

            elif keyword == "edge":
                if len(args) != 4:
                    raise _fail(InstanceFormatError, line, ERROR_MESSAGES["arity"].format(
                        keyword=keyword, expected=4, got=len(args)))
                eid, u, v, cap = args
                claim("edge", eid, line)
                refer(u, "edge", eid, line)
                refer(v, "edge", eid, line)
                edges.append(SupplyEdge(edge_id=eid, u=u, v=v, capacity=_parse_count(cap, line)))

            elif keyword == "face":
                outer = len(args) > 2 and args[-1] == OUTER_TOKEN
                cycle = args[1:-1] if outer else args[1:]
                if len(cycle) < 2:
                    raise _fail(InstanceFormatError, line, ERROR_MESSAGES["arity"].format(
                        keyword=keyword, expected="at least 3", got=len(args)))
                fid = args[0]
                claim("face", fid, line)
                for vertex in cycle:
                    refer(vertex, "face", fid, line)
                faces.append(Face(face_id=fid, boundary=tuple(cycle), outer=outer))

            else:
                if len(args) != 5:
                    raise _fail(InstanceFormatError, line, ERROR_MESSAGES["arity"].format(
                        keyword=keyword, expected=5, got=len(args)))
                did, s, t, req, fid = args
                claim("demand", did, line)
                refer(s, "demand", did, line)
                refer(t, "demand", did, line)
                demands.append(Demand(
                    demand_id=did, s=s, t=t, request=_parse_count(req, line), home_face=fid,
                ))
                demand_lines[did] = line
        except ValidationError as e:
            ident = args[0] if args else keyword
            raise _fail(InstanceFormatError, line, ERROR_MESSAGES["invalid_record"].format(
                kind=keyword, ident=ident, error=e.errors()[0]["msg"]))

    # vertex lines may come after the records that use them
    for vertex, kind, ident, line in references:
        if vertex not in seen["vertex"]:
            raise _fail(
                InstanceFormatError, line,
                ERROR_MESSAGES["unknown_vertex"].format(vertex=vertex, kind=kind, ident=ident),
            )

    outer_count = sum(1 for face in faces if face.outer)
    if faces and outer_count != 1:
        raise InstanceFormatError(ERROR_MESSAGES["outer_count"].format(count=outer_count))

    by_face = {face.face_id: face for face in faces}
    for demand in demands:
        line = demand_lines[demand.demand_id]
        face = by_face.get(demand.home_face)
        if face is None:
            raise _fail(InstanceFormatError, line, ERROR_MESSAGES["unknown_face"].format(
                ident=demand.demand_id, face=demand.home_face))
        for vertex in (demand.s, demand.t):
            if vertex not in face:
                raise _fail(InstanceFormatError, line, ERROR_MESSAGES["demand_off_face"].format(
                    ident=demand.demand_id, vertex=vertex, face=face.face_id))

    instance = PlanarInstance(
        vertices=tuple(vertices), edges=tuple(edges), faces=tuple(faces), demands=tuple(demands)
    )
    logger.info(
        f"Parsed instance: {len(vertices)} vertices, {len(edges)} edges, "
        f"{len(faces)} faces, {len(demands)} demands"
    )
    return instance


def serialize_instance(inst: PlanarInstance) -> str:
    """
    Serialize an instance in canonical form.

    Vertices, edges, faces and demands are each sorted by identifier; face
    boundaries keep their stored cyclic order.

    Args:
        inst: Instance to serialize

    Returns:
        Document text ending with a newline
    """
    lines = [f"vertex {v}" for v in sorted(inst.vertices)]
    lines += [
        f"edge {e.edge_id} {e.u} {e.v} {e.capacity}"
        for e in sorted(inst.edges, key=lambda e: e.edge_id)
    ]
    for face in sorted(inst.faces, key=lambda f: f.face_id):
        suffix = f" {OUTER_TOKEN}" if face.outer else ""
        lines.append(f"face {face.face_id} {' '.join(face.boundary)}{suffix}")
    lines += [
        f"demand {d.demand_id} {d.s} {d.t} {d.request} {d.home_face}"
        for d in sorted(inst.demands, key=lambda d: d.demand_id)
    ]
    return "\n".join(lines) + "\n"


def read_document(path: Union[str, Path]) -> str:
    """
    Read a document from a file, or from stdin when the path is "-".

    Raises:
        OSError: If the file cannot be read
    """
    if str(path) == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_instance(path: Union[str, Path]) -> PlanarInstance:
    """
    Load an instance document from disk.

    Args:
        path: File path, or "-" for stdin

    Returns:
        Parsed instance

    Raises:
        InstanceFormatError: If the file is unreadable or malformed
    """
    try:
        text = read_document(path)
    except OSError as e:
        raise InstanceFormatError(ERROR_MESSAGES["unreadable"].format(path=path, error=str(e)))
    return parse_instance(text)


def parse_routing(text: str) -> Routing:
    """
    Parse a routing document.

    Args:
        text: Lines of ``path``, ``load`` and ``alpha`` records

    Returns:
        Routing with walks grouped per demand in document order

    Raises:
        RoutingFormatError: On malformed records
    """
    assignments: Dict[str, List[Walk]] = {}
    loads: Dict[str, int] = {}
    alpha: Optional[int] = 0

    for line, tokens in _tokens(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword not in ROUTING_KEYWORDS:
            raise _fail(RoutingFormatError, line,
                        ERROR_MESSAGES["unknown_keyword"].format(keyword=keyword))
        if keyword == "path":
            if len(args) < 3:
                raise _fail(RoutingFormatError, line, ERROR_MESSAGES["arity"].format(
                    keyword=keyword, expected="at least 3", got=len(args)))
            assignments.setdefault(args[0], []).append(tuple(args[1:]))
        elif keyword == "load":
            if len(args) != 2:
                raise _fail(RoutingFormatError, line, ERROR_MESSAGES["arity"].format(
                    keyword=keyword, expected=2, got=len(args)))
            if args[0] in loads:
                raise _fail(RoutingFormatError, line, ERROR_MESSAGES["duplicate_id"].format(
                    kind="load", ident=args[0]))
            loads[args[0]] = _parse_count(args[1], line, RoutingFormatError)
        else:
            if len(args) != 1:
                raise _fail(RoutingFormatError, line, ERROR_MESSAGES["arity"].format(
                    keyword=keyword, expected=1, got=len(args)))
            alpha = None if args[0] == UNBOUNDED_ALPHA_TOKEN else _parse_count(
                args[0], line, RoutingFormatError)

    return Routing(assignments=assignments, loads=loads, alpha=alpha)


def serialize_routing(routing: Routing) -> str:
    """
    Serialize a routing: paths grouped by demand id, then loads, then alpha.

    Args:
        routing: Routing to serialize

    Returns:
        Document text ending with a newline
    """
    lines = []
    for did in sorted(routing.assignments):
        lines += [f"path {did} {' '.join(walk)}" for walk in routing.assignments[did]]
    lines += [f"load {eid} {routing.loads[eid]}" for eid in sorted(routing.loads)]
    alpha = UNBOUNDED_ALPHA_TOKEN if routing.alpha is None else str(routing.alpha)
    lines.append(f"alpha {alpha}")
    return "\n".join(lines) + "\n"


def load_routing(path: Union[str, Path]) -> Routing:
    """
    Load a routing document from disk.

    Raises:
        RoutingFormatError: If the file is unreadable or malformed
    """
    try:
        text = read_document(path)
    except OSError as e:
        raise RoutingFormatError(ERROR_MESSAGES["unreadable"].format(path=path, error=str(e)))
    return parse_routing(text)
