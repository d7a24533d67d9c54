"""
Command-line interface for the planar congestion router.

Subcommands read instance and routing documents (``-`` for stdin) and write
deterministic text to stdout. Exit status is 0 for success or a positive
verdict, 1 for a negative verdict and 2 for usage and input errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, List, Optional

from .bounds import invocation_scan, verify_chain
from .config import (
    EXIT_NEGATIVE,
    EXIT_OK,
    EXIT_USAGE,
    SUCCESS_MESSAGES,
    configure_logging,
    load_settings,
)
from .congestion import CongestionError, CutConditionViolated, route_with_bound
from .cuts import check_cut_condition
from .data_loader import (
    load_instance,
    load_routing,
    serialize_instance,
    serialize_routing,
)
from .generator import (
    build_params,
    generate_instance,
    generate_planar_union_instance,
)
from .planar import validate
from .reporting import (
    format_bound_report,
    format_face_trace,
    format_level_trace,
    format_scan,
    format_summary,
    format_validation,
    format_violation,
    format_witness,
    loads_table,
)
from .router import RouterBudgetExceeded, verify_routing
from .uncrossing import plan_level, select_pairs

logger = logging.getLogger(__name__)


def _emit(text: str, output: Optional[str] = None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args: argparse.Namespace) -> int:
    report = validate(load_instance(args.instance))
    _emit(format_validation(report))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_check_cut(args: argparse.Namespace) -> int:
    witness = check_cut_condition(load_instance(args.instance), mode=args.mode)
    if witness is None:
        _emit(SUCCESS_MESSAGES["cut_ok"] + "\n")
        return EXIT_OK
    _emit(format_witness(witness))
    return EXIT_NEGATIVE


def cmd_uncross_demo(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    if args.face:
        _emit("\n".join(format_face_trace(select_pairs(inst, args.face))) + "\n")
    else:
        _emit(format_level_trace(plan_level(inst)))
    return EXIT_OK


def cmd_route(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    try:
        result = route_with_bound(inst)
    except CutConditionViolated as e:
        _emit(format_witness(e.witness))
        return EXIT_NEGATIVE
    except (CongestionError, RouterBudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NEGATIVE

    _emit(serialize_routing(result.routing), args.output)
    _emit(format_summary(result))
    if args.loads:
        sys.stderr.write(loads_table(inst, result.routing).to_string(index=False) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    routing = load_routing(args.routing)
    violation = verify_routing(inst, routing, args.alpha)
    if violation is None:
        _emit(SUCCESS_MESSAGES["routing_ok"] + "\n")
        return EXIT_OK
    _emit(format_violation(violation))
    return EXIT_NEGATIVE


def cmd_bounds(args: argparse.Namespace) -> int:
    if args.scan is not None:
        _emit(format_scan(invocation_scan(args.scan)))
    else:
        _emit(format_bound_report(verify_chain(args.n, args.c)))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    params = build_params(
        seed=args.seed,
        vertex_budget=args.vertices,
        face_demand_budget=args.face_demands,
        max_request=args.max_request,
        slack=args.slack,
    )
    factory = generate_planar_union_instance if args.planar_union else generate_instance
    inst = factory(params)
    _emit(serialize_instance(inst), args.output)
    logger.info(SUCCESS_MESSAGES["generated"].format(
        vertices=len(inst.vertices), edges=len(inst.edges), demands=len(inst.demands)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="planar-congestion",
        description="Route face-homed demands in planar graphs with bounded congestion.",
    )
    parser.add_argument("--config", help="YAML settings file")
    parser.add_argument("--log-level", help="Logging level (overrides the settings file)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Check the structural invariants of an instance")
    p.add_argument("instance", help="Instance file, or - for stdin")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("check-cut", help="Decide the cut condition exhaustively")
    p.add_argument("instance")
    p.add_argument("--mode", choices=["all", "central"], default="all")
    p.set_defaults(handler=cmd_check_cut)

    p = sub.add_parser("uncross-demo", help="Print the uncrossing trace of one level")
    p.add_argument("instance")
    p.add_argument("--face", help="Trace only this face")
    p.set_defaults(handler=cmd_uncross_demo)

    p = sub.add_parser("route", help="Route all demands within the congestion bound")
    p.add_argument("instance")
    p.add_argument("-o", "--output", help="Write the routing here instead of stdout")
    p.add_argument("--loads", action="store_true", help="Print a per-edge load table on stderr")
    p.set_defaults(handler=cmd_route)

    p = sub.add_parser("verify", help="Check a routing against an instance")
    p.add_argument("instance")
    p.add_argument("routing")
    p.add_argument("--alpha", type=int, default=1, help="Allowed congestion (default 1)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bounds", help="Evaluate the invocation-count lower bound")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="Terminal-count parameter")
    group.add_argument("--scan", type=int, metavar="NMAX", help="Scan n = 2, 4, ... up to NMAX")
    p.add_argument("--c", type=int, help="Invocation count (default floor(ln n / (4 ln ln n)))")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("gen", help="Generate a planted-feasible instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--vertices", type=int, help="Vertices on the outer cycle")
    p.add_argument("--face-demands", type=int, help="Max demands per face")
    p.add_argument("--max-request", type=int, help="Max request per demand")
    p.add_argument("--slack", type=int, help="Added to planted capacities")
    p.add_argument("--planar-union", action="store_true", help="Drop crossing demands")
    p.add_argument("-o", "--output", help="Write the instance here instead of stdout")
    p.set_defaults(handler=cmd_gen)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name (defaults to sys.argv)

    Returns:
        Exit status
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        if args.config:
            load_settings(args.config)
        configure_logging(args.log_level)
        handler: Callable[[argparse.Namespace], int] = args.handler
        return handler(args)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
