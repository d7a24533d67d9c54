"""
Reporting module for the planar congestion router.

Deterministic text renderings of uncrossing traces, cut witnesses, routing
summaries and bound reports. Tabular output goes through pandas so columns
line up the same way on every run.
"""

import logging
from typing import List, Sequence

import pandas as pd

from .models import (
    BoundReport,
    CutWitness,
    DriverResult,
    FaceUncrossPlan,
    LevelPlan,
    Pair,
    PlanarInstance,
    Routing,
    RoutingViolation,
    ValidationReport,
)

logger = logging.getLogger(__name__)


def _pair(endpoints: Pair) -> str:
    return f"{endpoints[0]}-{endpoints[1]}"


def format_face_trace(plan: FaceUncrossPlan) -> List[str]:
    """
    Lines describing one face's selection: terminals, each step, the white
    edges, the red demands and the chord.
    """
    terms = plan.terminals
    u = terms.terminal
    lines = [f"face {plan.face_id} m {terms.m} k {terms.k} terminals {' '.join(terms.terminals)}"]

    for number, step in enumerate(plan.steps, start=1):
        head = (
            f"step {number} i {step.i} j {step.j} i' {step.i2} j' {step.j2} "
            f"m {step.multiplicity}"
        )
        if step.solo:
            lines.append(f"{head} solo {u(step.i)}-{u(step.j)} white {u(step.i)}-{u(step.j)}")
        else:
            lines.append(
                f"{head} pair {u(step.i)}-{u(step.j)} {u(step.i2)}-{u(step.j2)} "
                f"white {u(step.i)}-{u(step.j2)} "
                f"red {u(step.i)}-{u(step.i2)} {u(step.j)}-{u(step.j2)}"
            )

    lines += [f"white {_pair(w.endpoints)} {w.weight} {w.origin}" for w in plan.white]
    lines += [f"red {_pair(r.endpoints)} {r.request}" for r in plan.red]
    lines.append(f"chord {plan.chord[0]} {plan.chord[1]}")
    return lines


def format_level_trace(plan: LevelPlan) -> str:
    """Face traces of a level plan followed by its merged residual demands."""
    lines: List[str] = []
    for face_id in sorted(plan.plans):
        lines += format_face_trace(plan.plans[face_id])
    residual = sorted(plan.residual_instance.demands, key=lambda d: (d.home_face, d.pair))
    lines += [f"residual {d.home_face} {_pair(d.pair)} {d.request}" for d in residual]
    return "\n".join(lines) + "\n"


def format_validation(report: ValidationReport) -> str:
    if report.ok:
        return "ok\n"
    return "".join(
        f"violation {v.kind} {v.element}" + (f" {v.detail}" if v.detail else "") + "\n"
        for v in report.violations
    )


def format_witness(witness: CutWitness) -> str:
    return (
        f"violated X {' '.join(witness.side)} capacity {witness.capacity_across} "
        f"request {witness.request_across} central {'yes' if witness.central else 'no'}\n"
    )


def format_violation(violation: RoutingViolation) -> str:
    detail = f" {violation.detail}" if violation.detail else ""
    return f"violation {violation.kind} {violation.element}{detail}\n"


def format_summary(result: DriverResult) -> str:
    """Summary line: achieved congestion, bound, k and levels."""
    alpha = "inf" if result.alpha is None else str(result.alpha)
    return f"congestion {alpha} bound {result.bound} k {result.k} levels {result.levels}\n"


def loads_table(inst: PlanarInstance, routing: Routing) -> pd.DataFrame:
    """
    Per-edge loads next to capacities.

    Args:
        inst: Routed instance
        routing: Routing with per-edge loads

    Returns:
        DataFrame with columns edge, u, v, capacity, load, ratio sorted by edge
    """
    rows = []
    for edge in sorted(inst.edges, key=lambda e: e.edge_id):
        load = routing.loads.get(edge.edge_id, 0)
        rows.append({
            "edge": edge.edge_id,
            "u": edge.u,
            "v": edge.v,
            "capacity": edge.capacity,
            "load": load,
            "ratio": round(load / edge.capacity, 3) if edge.capacity else None,
        })
    return pd.DataFrame(rows, columns=["edge", "u", "v", "capacity", "load", "ratio"])


def format_bound_report(report: BoundReport) -> str:
    """
    Aligned text rendering of a bound report.

    Exact values appear as ``C_n=..``, ``m_c=..`` and ``total=..`` lines when
    the report carries them; the chain steps follow as a table.
    """
    lines = [f"n {report.n} c {report.c}"]
    if report.catalan is not None:
        lines.append(f"C_{report.n}={report.catalan}")
    if report.matching_glue is not None:
        lines.append(f"m_{report.c}={report.matching_glue}")
    if report.total is not None:
        lines.append(f"total={report.total}")
    lines.append(f"log_solvable {report.log_solvable:.6f}")
    lines.append(f"log_total {report.log_total:.6f}")
    lines.append(f"covered {'yes' if report.verdict else 'no'}")

    table = pd.DataFrame(
        [
            {
                "step": step.name,
                "lhs": f"{step.lhs:.6f}",
                "rhs": f"{step.rhs:.6f}",
                "holds": "yes" if step.holds else "no",
            }
            for step in report.chain_steps
        ],
        columns=["step", "lhs", "rhs", "holds"],
    )
    lines.append(table.to_string(index=False))
    lines.append(f"chain {'holds' if report.chain_holds else 'fails'}")
    return "\n".join(lines) + "\n"


def format_scan(scan: pd.DataFrame, columns: Sequence[str] = ("n", "min_invocations", "threshold")) -> str:
    return scan.loc[:, list(columns)].to_string(index=False) + "\n"
