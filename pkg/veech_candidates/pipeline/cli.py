import argparse
import csv
import enum
import json
import logging
import sys

import veech_candidates

from ..flatsurf import (
    Direction,
    DegenerateParameterError,
    build_prototype,
    cylinder_decomposition,
    decagon_params,
    intersection_matrix,
    load_params,
    measure_geometry,
    moduli_commensurability,
    validate_surface,
)
from ..neron import (
    DualGraph,
    DualGraphError,
    build_presentation,
    class_order,
    component_group,
    torsion_order_formula,
)
from ..relations import enumerate_period_tuples, mann_conductor_bound, mann_soundness_scan
from .config import ConfigError, SearchConfig, load_search_config, workers_from_env
from .record import verify_candidate
from .report import ReportFormat, load_records, write_report
from .search import SearchBudgetExceeded, run_search

logger = logging.getLogger(__name__)

cli_version = veech_candidates.__version__


class VeechExitCodes(enum.Enum):
    SUCCESS = 0
    EXCEPTION_OCCURRED = 1
    BUDGET_EXHAUSTED = 2
    INVALID_INPUT = 3
    CHECK_FAILED = 4


# The following text is displayed as part of help information (-h or --help option)
cli_examples = """
Examples of CLI commands
------------------------
veech-candidates mann-bound -k 4 -g 2
veech-candidates relations enumerate --genus 2 --order-cap 10
veech-candidates relations mann-scan --max-terms 4 --coeff-bound 2 --order-cap 12
veech-candidates component-group --moduli 1,2,1 --a 0 --b 0 --k 1
veech-candidates component-group --moduli 1,2,1 --json
veech-candidates surface analyze --decagon
veech-candidates surface analyze --params params.json --direction vertical
veech-candidates search --genus 2 --order-cap 10 --strict --out candidates.jsonl
veech-candidates verify candidates.jsonl
"""

s_workers = (
    "The number of worker processes is set by the environment variable VEECH_CANDIDATES_WORKERS\n"
    "(default 1). The output does not depend on it:\n\n"
    "    export VEECH_CANDIDATES_WORKERS=4"
)


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with ``VeechExitCodes.INVALID_INPUT``."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(VeechExitCodes.INVALID_INPUT.value, f"{self.prog}: error: {message}\n")


def _print_json(data):
    print(json.dumps(data, indent=2, sort_keys=True))


def _cmd_mann_bound(args):
    _print_json({"k": args.k, "g": args.g, "conductor_bound": mann_conductor_bound(args.k, args.g)})
    return VeechExitCodes.SUCCESS


def _cmd_relations_enumerate(args):
    tuples = enumerate_period_tuples(args.genus, args.order_cap, workers=workers_from_env())
    for t in tuples:
        print(json.dumps(t.to_json(), sort_keys=True))
    logger.info("%d period tuples", len(tuples))
    return VeechExitCodes.SUCCESS


def _cmd_relations_mann_scan(args):
    report = mann_soundness_scan(args.max_terms, args.coeff_bound, args.order_cap)
    _print_json(
        {
            "supports_checked": report.supports_checked,
            "relations_checked": report.relations_checked,
            "counterexamples": [r.to_json() for r in report.counterexamples],
        }
    )
    return VeechExitCodes.SUCCESS if report.passed else VeechExitCodes.CHECK_FAILED


def _cmd_component_group(args):
    moduli = tuple(m for group in args.moduli for m in group)
    graph = DualGraph.from_moduli(moduli, a=args.a, b=args.b, k=args.k)
    p = build_presentation(graph)
    order = class_order(p)
    data = {
        "moduli": list(graph.moduli),
        "invariant_factors": component_group(p),
        "section_class_order": order,
    }
    if graph.connecting:
        data["formula"] = torsion_order_formula(graph.moduli, graph.loops_v1, graph.loops_v2)
    if args.json:
        _print_json(data)
    else:
        print(f"moduli: {','.join(str(m) for m in data['moduli'])}")
        print(f"invariant factors: {data['invariant_factors']}")
        print(f"section class order: {order}")
        if "formula" in data:
            print(f"formula: {data['formula']}")
    return VeechExitCodes.SUCCESS


def _print_cylinder_table(s, direction, step_budget):
    """Cylinders of one direction and the intersection matrix, as CSV."""
    h = cylinder_decomposition(s, Direction.HORIZONTAL)
    v = cylinder_decomposition(s, Direction.VERTICAL, step_budget=step_budget)
    cylinders = h if direction == Direction.HORIZONTAL else v
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["direction", "cylinder", "circumference", "height", "modulus"])
    for index, c in enumerate(cylinders.cylinders, start=1):
        writer.writerow([direction.value, index, c.circumference, c.height, c.modulus])
    print()
    E = intersection_matrix(s, h, v)
    writer.writerow(["intersection"] + [f"v{j}" for j in range(1, len(v) + 1)])
    for index, row in enumerate(E.entries, start=1):
        writer.writerow([f"h{index}"] + list(row))


def _cmd_surface_analyze(args):
    if args.decagon == bool(args.params):
        raise ValueError("Specify either '--params' or '--decagon'")
    p = decagon_params() if args.decagon else load_params(args.params)
    s = build_prototype(p)
    report = validate_surface(s)
    if args.direction:
        _print_cylinder_table(s, Direction(args.direction), args.step_budget)
        for error in report.errors:
            logger.warning("Surface check failed: %s", error)
        return VeechExitCodes.SUCCESS if report.passed else VeechExitCodes.CHECK_FAILED

    data = {
        "genus": report.genus,
        "connected": report.connected,
        "zero_orders": report.zero_orders,
        "fixed_points": report.fixed_points,
        "errors": report.errors,
        "area": str(s.area()),
        "horizontal_moduli": [str(m) for m in p.moduli()],
    }
    h = cylinder_decomposition(s, Direction.HORIZONTAL)
    v = cylinder_decomposition(s, Direction.VERTICAL, step_budget=args.step_budget)
    commensurable, moduli = moduli_commensurability(v)
    data["vertical"] = {
        "cylinders": len(v),
        "circumferences": [str(c.circumference) for c in v.cylinders],
        "heights": [str(c.height) for c in v.cylinders],
        "moduli": list(moduli) if commensurable else None,
        "intersection_matrix": intersection_matrix(s, h, v).to_json(),
        "identities": measure_geometry(s, step_budget=args.step_budget).identities_hold(),
    }
    _print_json(data)
    return VeechExitCodes.SUCCESS if report.passed else VeechExitCodes.CHECK_FAILED


def _cmd_search(args):
    overrides = {
        "genus": args.genus,
        "order_cap": args.order_cap,
        "winding_cap": args.winding_cap,
        "moduli_cap": args.moduli_cap,
        "entry_cap": args.entry_cap,
        "step_budget": args.step_budget,
        "strict": True if args.strict else None,
    }
    config = SearchConfig.from_dict(load_search_config(args.config), **overrides)
    result = run_search(config, workers=workers_from_env())
    if args.out:
        with open(args.out, "w", newline="") as stream:
            write_report(result.records, stream, args.format)
    else:
        write_report(result.records, sys.stdout, args.format)
    logger.info("Search statistics: %s", json.dumps(result.stats.to_json(), sort_keys=True))
    return VeechExitCodes.SUCCESS


def _cmd_verify(args):
    records = load_records(args.path)
    failed = 0
    for record in records:
        report = verify_candidate(record, strict=True if args.strict else None)
        roots = ", ".join(str(x) for x in record.roots)
        print(f"{roots}  moduli {record.moduli}: {'passed' if report.passed else 'FAILED'}")
        for name, result in report.checks.items():
            print(f"    {name}: {'ok' if result else 'failed'}")
        failed += not report.passed
    logger.info("Verified %d records, %d failed", len(records), failed)
    return VeechExitCodes.SUCCESS if not failed else VeechExitCodes.CHECK_FAILED


def _positive_int(value):
    value = int(value)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonnegative_int(value):
    value = int(value)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _moduli_list(value):
    try:
        return [_positive_int(m) for m in value.split(",") if m.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected positive integers separated by commas, got '{value}'")


def _create_parser():
    parser = _ArgumentParser(
        description="Candidate prototypes of algebraically primitive Veech surfaces in the hyperelliptic\n"
        f"components of genus g with two zeros.\nveech-candidates version {cli_version}.\n",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"\n\n{s_workers}\n\n{cli_examples}\n\n",
    )

    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--verbose",
        dest="logger_verbose",
        action="store_true",
        help="Set logger level to DEBUG.",
    )
    group.add_argument(
        "--quiet",
        dest="logger_quiet",
        action="store_true",
        help="Set logger level to WARNING.",
    )
    group.add_argument(
        "--silent",
        dest="logger_silent",
        action="store_true",
        help="Disables logging output.",
    )

    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    p = subparsers.add_parser("mann-bound", help="Conductor bound for irreducible relations.")
    p.add_argument("-k", type=_positive_int, required=True, help="Number of terms of the relation.")
    p.add_argument("-g", type=_positive_int, required=True, help="Degree of the coefficient field.")
    p.set_defaults(func=_cmd_mann_bound)

    relations = subparsers.add_parser("relations", help="Period tuples and relations between roots of unity.")
    relations_sub = relations.add_subparsers(dest="relations_command", metavar="subcommand")
    relations_sub.required = True
    p = relations_sub.add_parser("enumerate", help="Accepted period tuples, one per class.")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--order-cap", dest="order_cap", type=_positive_int, required=True)
    p.set_defaults(func=_cmd_relations_enumerate)
    p = relations_sub.add_parser("mann-scan", help="Check the conductor bound on small irreducible relations.")
    p.add_argument("--max-terms", dest="max_terms", type=_positive_int, default=5)
    p.add_argument("--coeff-bound", dest="coeff_bound", type=_positive_int, default=3)
    p.add_argument("--order-cap", dest="order_cap", type=_positive_int, default=30)
    p.set_defaults(func=_cmd_relations_mann_scan)

    p = subparsers.add_parser("component-group", help="Component group and order of the section class.")
    p.add_argument(
        "--moduli",
        nargs="+",
        type=_moduli_list,
        required=True,
        help="Moduli of the edges, separated by commas or spaces (e.g. 1,2,1).",
    )
    p.add_argument("--a", dest="a", type=_nonnegative_int, default=0, help="Loops at the first component.")
    p.add_argument("--b", dest="b", type=_nonnegative_int, default=0, help="Loops at the second component.")
    p.add_argument("-k", "--k", dest="k", type=_positive_int, default=1, help="Common multiplier of the chains.")
    p.add_argument("--json", action="store_true", help="Print the result as JSON.")
    p.set_defaults(func=_cmd_component_group)

    surface = subparsers.add_parser("surface", help="Prototype surfaces.")
    surface_sub = surface.add_subparsers(dest="surface_command", metavar="subcommand")
    surface_sub.required = True
    p = surface_sub.add_parser("analyze", help="Topology and cylinder decompositions of a prototype.")
    p.add_argument("--params", default=None, help="Path to a JSON file with prototype parameters.")
    p.add_argument("--decagon", action="store_true", help="Analyze the decagon prototype.")
    p.add_argument(
        "--direction",
        choices=[d.value for d in Direction],
        default=None,
        help="Print the cylinders of this direction and the intersection matrix as CSV.",
    )
    p.add_argument("--step-budget", dest="step_budget", type=_positive_int, default=10**5)
    p.set_defaults(func=_cmd_surface_analyze)

    p = subparsers.add_parser("search", help="Enumerate candidate prototypes.")
    p.add_argument("--config", type=str, default=None, help="YAML file with search parameters.")
    p.add_argument("--genus", type=int, default=None)
    p.add_argument("--order-cap", dest="order_cap", type=_positive_int, default=None)
    p.add_argument("--winding-cap", dest="winding_cap", type=int, default=None)
    p.add_argument("--moduli-cap", dest="moduli_cap", type=_positive_int, default=None)
    p.add_argument(
        "--entry-cap",
        dest="entry_cap",
        type=_positive_int,
        default=None,
        help="Bound on the entries of intersection matrices (default: 2g).",
    )
    p.add_argument("--step-budget", dest="step_budget", type=_positive_int, default=None)
    p.add_argument(
        "--strict",
        action="store_true",
        help="Also require the built surface to have the predicted vertical cylinders.",
    )
    p.add_argument("--out", type=str, default=None, help="Output file (default: standard output).")
    p.add_argument("--format", choices=[f.value for f in ReportFormat], default=ReportFormat.JSONL.value)
    p.set_defaults(func=_cmd_search)

    p = subparsers.add_parser("verify", help="Re-run all checks on records from a JSONL or CSV file.")
    p.add_argument("path", help="Path to the file with records.")
    p.add_argument("--strict", action="store_true", help="Also match the vertical decomposition.")
    p.set_defaults(func=_cmd_verify)

    return parser


def veech_candidates_cli(argv=None):
    parser = _create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        # '--help' exits with 0, usage errors with INVALID_INPUT
        return ex.code

    log_level = logging.INFO
    if args.logger_verbose:
        log_level = logging.DEBUG
    elif args.logger_quiet:
        log_level = logging.WARNING
    elif args.logger_silent:
        log_level = logging.CRITICAL + 1

    logging.basicConfig(level=max(logging.WARNING, log_level))
    logging.getLogger("veech_candidates").setLevel(log_level)

    try:
        exit_code = args.func(args)
    except SearchBudgetExceeded as ex:
        logger.error("Search stopped: %s", ex)
        exit_code = VeechExitCodes.BUDGET_EXHAUSTED
    except (ConfigError, DualGraphError, DegenerateParameterError, IOError, ValueError) as ex:
        logger.error("Invalid input: %s", ex)
        exit_code = VeechExitCodes.INVALID_INPUT
    except Exception as ex:
        logger.exception("Exception occurred: %s", ex)
        exit_code = VeechExitCodes.EXCEPTION_OCCURRED
    except KeyboardInterrupt:
        print("\nThe program was manually stopped.")
        exit_code = VeechExitCodes.SUCCESS

    return exit_code.value
